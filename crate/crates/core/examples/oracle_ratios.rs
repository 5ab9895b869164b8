//! Prints the invariant-oracle ratios next to `(m+1)/[m+1]_{q²}`.
//!
//! `cargo run --release --example oracle_ratios -- 2 6`

use twistforge::fock::FockSpace;
use twistforge::twist::{solve_twist, SolveOptions};
use twistforge::verify::{expected_ratio, solve_invariant_oracle, Convention};

fn main() -> twistforge::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let order = args.next().unwrap_or(2);
    let cutoff = args.next().unwrap_or(6);
    let t = solve_twist(SolveOptions::new(order))?;
    let space = FockSpace::bose(cutoff);
    let res = solve_invariant_oracle(&t, &space, 2, Convention::Mirrored)?;
    println!("confirmation: {:?}", res.confirmation.status);
    for (m, r) in res.ratios.iter().enumerate() {
        println!("m={m}  oracle {r}  closed form {}", expected_ratio(m, order)?);
    }
    Ok(())
}
