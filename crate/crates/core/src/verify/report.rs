use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fock::OperatorSeries;
use crate::hopf::{AlgElement, SeriesMatrix, TensorElement};
use crate::scalar::{HSeries, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one identity check. `Pass` means every residual coefficient is
/// literally zero through the truncation order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    pub first_failing_order: Option<usize>,
    pub max_residual: Option<String>,
    pub metadata: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn experimental(&self) -> bool {
        self.metadata
            .get("experimental")
            .and_then(Value::as_bool)
            .unwrap_or(false)
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn mark_experimental(self) -> Self {
        self.with_meta("experimental", true)
    }
}

/// Accumulates the largest absolute nonzero residual coefficient per order.
#[derive(Clone, Debug)]
pub struct Residual {
    per_order: Vec<Option<Q>>,
}

impl Residual {
    pub fn new(order: usize) -> Self {
        Self {
            per_order: vec![None; order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.per_order.len() - 1
    }

    pub fn absorb_q(&mut self, k: usize, c: &Q) {
        if c.is_zero() || k >= self.per_order.len() {
            return;
        }
        let a = c.abs();
        let slot = &mut self.per_order[k];
        match slot {
            Some(m) if *m >= a => {}
            _ => *slot = Some(a),
        }
    }

    pub fn absorb(&mut self, s: &HSeries) {
        for (k, c) in s.coeffs().iter().enumerate() {
            self.absorb_q(k, c);
        }
    }

    pub fn absorb_element(&mut self, e: &AlgElement) {
        for c in e.terms().values() {
            self.absorb(c);
        }
    }

    pub fn absorb_tensor(&mut self, t: &TensorElement) {
        for c in t.terms().values() {
            self.absorb(c);
        }
    }

    pub fn absorb_matrix(&mut self, m: &SeriesMatrix) {
        for c in m.entries() {
            self.absorb(c);
        }
    }

    pub fn absorb_operator(&mut self, m: &OperatorSeries) {
        for (k, mat) in m.coeffs().iter().enumerate() {
            for (_, c) in mat.entries() {
                self.absorb_q(k, c);
            }
        }
    }

    pub fn merge(&mut self, other: &Residual) {
        for (k, c) in other.per_order.iter().enumerate() {
            if let Some(c) = c {
                self.absorb_q(k, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.per_order.iter().all(Option::is_none)
    }

    pub fn first_nonzero_order(&self) -> Option<usize> {
        self.per_order.iter().position(Option::is_some)
    }

    pub fn max(&self) -> Option<Q> {
        self.per_order.iter().flatten().max().cloned()
    }

    pub fn into_report(self, check: &str) -> VerificationReport {
        let per_order: Vec<Value> = self
            .per_order
            .iter()
            .map(|c| match c {
                Some(q) => Value::String(q.to_string()),
                None => Value::Null,
            })
            .collect();
        let mut metadata = BTreeMap::new();
        metadata.insert("per_order_max_residual".to_string(), Value::Array(per_order));
        VerificationReport {
            check: check.to_string(),
            status: if self.is_zero() {
                Status::Pass
            } else {
                Status::Fail
            },
            first_failing_order: self.first_nonzero_order(),
            max_residual: self.max().map(|q| q.to_string()),
            metadata,
        }
    }
}
