//! Cooperative per-thread deadline, polled inside the expensive loops so a
//! stats-harness timeout can interrupt a long pipeline run cleanly.

use std::cell::Cell;
use std::time::Instant;

use crate::error::{Error, Result};

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// Install a deadline for the current thread; restored on drop.
pub struct DeadlineGuard {
    prev: Option<Instant>,
}

pub fn set_deadline(deadline: Option<Instant>) -> DeadlineGuard {
    let prev = DEADLINE.with(|d| d.replace(deadline));
    DeadlineGuard { prev }
}

impl Drop for DeadlineGuard {
    fn drop(&mut self) {
        let prev = self.prev;
        DEADLINE.with(|d| d.set(prev));
    }
}

/// Fails with `Error::Timeout` once the installed deadline has passed.
pub fn check() -> Result<()> {
    DEADLINE.with(|d| match d.get() {
        Some(t) if Instant::now() > t => Err(Error::Timeout),
        _ => Ok(()),
    })
}

/// Cheap polling helper for tight loops: checks the clock every `stride`
/// calls as counted by the caller.
pub fn check_every(counter: &mut u32, stride: u32) -> Result<()> {
    *counter += 1;
    if *counter >= stride {
        *counter = 0;
        check()
    } else {
        Ok(())
    }
}
