//! Fixed inputs shared by the kernel benchmarks.

use std::collections::BTreeMap;

use ansatzkit::exact::q;
use ansatzkit::format::text::{parse_operator, CoeffRegistry};
use ansatzkit::{CoeffRingKind, RecurrenceSystem, Sequence};

pub fn system(op: &str, initials: &[i64]) -> RecurrenceSystem {
    let ring = op.contains("^n").then_some(CoeffRingKind::ExpPolyCoeff);
    let o = parse_operator(op, &CoeffRegistry::new(), ring).expect("fixture operator");
    RecurrenceSystem::new(o, initials.iter().map(|&x| q(x)).collect(), 0, 0)
        .expect("fixture system")
}

pub fn fibonacci() -> RecurrenceSystem {
    system("N^2 - N - 1", &[0, 1])
}

pub fn catalan() -> RecurrenceSystem {
    system("(4*n+2) - (n+2)*N", &[1])
}

pub fn factorial() -> RecurrenceSystem {
    system("(n+1) - N", &[1])
}

/// Floor-of-squares sequence `0, 0, 1, 2, 4, 6, 9, ...`.
pub fn floor_squares() -> RecurrenceSystem {
    system("N^4 - 2*N^3 + 2*N - 1", &[0, 0, 1, 2])
}

pub fn terms(rs: &RecurrenceSystem, count: usize) -> Sequence {
    rs.expand(count).expect("fixture expansion")
}

pub fn floor_registry() -> BTreeMap<String, RecurrenceSystem> {
    BTreeMap::from([("a".to_string(), floor_squares())])
}

/// Nonlinear identity satisfied by [`floor_squares`]; its order bound is 68.
pub const FLOOR_IDENTITY: &str = "a(n+1) - a(n)*a(n+1) + a(n)*a(n+2) + a(n+1)^2 - a(n+1)*a(n+2)";
