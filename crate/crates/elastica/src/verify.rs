//! Named invariant suites (stub during bring-up).

pub fn placeholder() {}
