//! Shared fixtures for the benchmarks.

use bnl_core::{parse_pd, Diagram};

pub const KNOTS: [(&str, &str); 5] = [
    ("trefoil", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"),
    ("figure-eight", "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"),
    ("5_1", "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)"),
    ("6_1", "X(1,4,2,5) X(7,10,8,11) X(3,9,4,8) X(9,3,10,2) X(5,12,6,1) X(11,6,12,7)"),
    ("7_1", "X(1,8,2,9) X(3,10,4,11) X(5,12,6,13) X(7,14,8,1) X(9,2,10,3) X(11,4,12,5) X(13,6,14,7)"),
];

pub fn knots() -> Vec<(&'static str, Diagram)> {
    KNOTS.iter().map(|(n, pd)| (*n, parse_pd(pd).expect("fixture parses"))).collect()
}
