//! Holds the `acceptance` test target, which runs every reference experiment
//! from `configs/` and prints one PASS/FAIL line per check.
