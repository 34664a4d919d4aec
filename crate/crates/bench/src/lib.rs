//! Fixtures shared by the benchmarks.

use semigraphoid::{enumerate_triplets, Triplet, Universe};

/// Every unordered couple of canonical triplets over `n` numbered variables.
pub fn all_couples(n: usize) -> (Universe, Vec<(Triplet, Triplet)>) {
    let u = Universe::numbered(n).expect("valid universe");
    let all: Vec<Triplet> = enumerate_triplets(&u).expect("within cap").collect();
    let mut couples = Vec::with_capacity(all.len() * (all.len() + 1) / 2);
    for (i, x) in all.iter().enumerate() {
        for y in &all[i..] {
            couples.push((*x, *y));
        }
    }
    (u, couples)
}
