//! Command-line front end (placeholder while the numeric core stabilizes).

pub fn run() -> i32 {
    0
}
