//! Holds the `acceptance` test target; see `tests/acceptance.rs`.
//!
//! It lives in its own package so the suite runs after every other test
//! binary in the workspace.
