//! Sparse Gaussian elimination over the rationals.
//!
//! Rows are keyed by an arbitrary ordered type and interned on first use.
//! Elimination keeps an echelon form whose pivot of each row is its smallest
//! remaining column, so the pivot set is the lexicographically earliest set of
//! independent columns. Free columns are set to zero, which yields the
//! solution supported on the earliest columns.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::Zero;

use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// Some row reduces to `0 = rhs` with `rhs != 0`.
    Inconsistent,
    /// The system has free columns and the caller asked for uniqueness.
    Underdetermined(usize),
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub values: Vec<Q>,
    pub free_columns: Vec<usize>,
}

pub struct SparseSystem<R> {
    columns: usize,
    row_index: HashMap<R, usize>,
    rows: Vec<BTreeMap<usize, Q>>,
    rhs: Vec<Q>,
}

impl<R: Eq + Hash + Clone> SparseSystem<R> {
    pub fn new(columns: usize) -> Self {
        Self {
            columns,
            row_index: HashMap::new(),
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    fn row(&mut self, key: &R) -> usize {
        if let Some(&i) = self.row_index.get(key) {
            return i;
        }
        let i = self.rows.len();
        self.row_index.insert(key.clone(), i);
        self.rows.push(BTreeMap::new());
        self.rhs.push(Q::zero());
        i
    }

    pub fn add_entry(&mut self, key: &R, column: usize, value: &Q) {
        if value.is_zero() {
            return;
        }
        let i = self.row(key);
        let e = self.rows[i].entry(column).or_insert_with(Q::zero);
        *e += value;
        if e.is_zero() {
            self.rows[i].remove(&column);
        }
    }

    pub fn add_rhs(&mut self, key: &R, value: &Q) {
        if value.is_zero() {
            return;
        }
        let i = self.row(key);
        self.rhs[i] += value;
    }

    /// Solves the system; with `require_unique` any free column is an error.
    pub fn solve(&self, require_unique: bool) -> Result<Solution, SolveError> {
        let mut pivots: BTreeMap<usize, (BTreeMap<usize, Q>, Q)> = BTreeMap::new();
        for (row, rhs) in self.rows.iter().zip(&self.rhs) {
            let mut row = row.clone();
            let mut rhs = rhs.clone();
            loop {
                let Some((&lead, lead_val)) = row.iter().next() else {
                    if !rhs.is_zero() {
                        return Err(SolveError::Inconsistent);
                    }
                    break;
                };
                match pivots.get(&lead) {
                    Some((prow, prhs)) => {
                        let factor = lead_val / &prow[&lead];
                        for (c, v) in prow {
                            let e = row.entry(*c).or_insert_with(Q::zero);
                            *e -= &factor * v;
                            if e.is_zero() {
                                row.remove(c);
                            }
                        }
                        rhs -= &factor * prhs;
                    }
                    None => {
                        pivots.insert(lead, (row, rhs));
                        break;
                    }
                }
            }
        }
        let free_columns: Vec<usize> = (0..self.columns)
            .filter(|c| !pivots.contains_key(c))
            .collect();
        if require_unique && !free_columns.is_empty() {
            return Err(SolveError::Underdetermined(free_columns.len()));
        }
        let mut values = vec![Q::zero(); self.columns];
        for (&col, (row, rhs)) in pivots.iter().rev() {
            let mut acc = rhs.clone();
            for (c, v) in row.range(col + 1..) {
                if !values[*c].is_zero() {
                    acc -= v * &values[*c];
                }
            }
            values[col] = acc / &row[&col];
        }
        Ok(Solution {
            values,
            free_columns,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let mut s = SparseSystem::new(2);
        s.add_entry(&"a", 0, &q_int(1));
        s.add_entry(&"a", 1, &q_int(1));
        s.add_rhs(&"a", &q_int(3));
        s.add_entry(&"b", 0, &q_int(1));
        s.add_entry(&"b", 1, &q_int(-1));
        s.add_rhs(&"b", &q_int(1));
        let sol = s.solve(true).unwrap();
        assert_eq!(sol.values, vec![q_int(2), q_int(1)]);
    }

    #[test]
    fn free_columns_are_late_and_zero() {
        // 2x + 4y + z = 1: pivot on x, y and z free
        let mut s = SparseSystem::new(3);
        s.add_entry(&0, 0, &q_int(2));
        s.add_entry(&0, 1, &q_int(4));
        s.add_entry(&0, 2, &q_int(1));
        s.add_rhs(&0, &q_int(1));
        let sol = s.solve(false).unwrap();
        assert_eq!(sol.values, vec![q_frac(1, 2), q_int(0), q_int(0)]);
        assert_eq!(sol.free_columns, vec![1, 2]);
        assert_eq!(s.solve(true).unwrap_err(), SolveError::Underdetermined(2));
    }

    #[test]
    fn inconsistent_detected() {
        let mut s = SparseSystem::new(1);
        s.add_entry(&0, 0, &q_int(1));
        s.add_rhs(&0, &q_int(1));
        s.add_entry(&1, 0, &q_int(2));
        s.add_rhs(&1, &q_int(3));
        assert_eq!(s.solve(false).unwrap_err(), SolveError::Inconsistent);
    }

    #[test]
    fn rhs_only_row_is_inconsistent() {
        let mut s: SparseSystem<u8> = SparseSystem::new(1);
        s.add_rhs(&7, &q_int(1));
        assert_eq!(s.solve(false).unwrap_err(), SolveError::Inconsistent);
    }
}
