use std::time::{Duration, Instant};

use kframe_core::search::{find_model_with, AbortReason, SearchStats};
use kframe_core::{FoKernel, ModalFormula, SearchConfig, SearchOutcome, SearchStatus};

use crate::error::Result;

/// A search outcome with its wall-clock time.
#[derive(Debug, Clone)]
pub struct TimedOutcome {
    pub outcome: SearchOutcome,
    pub elapsed: Duration,
    /// Set when the time limit stopped the search.
    pub timed_out: bool,
}

/// Runs the bounded search, aborting once `time_limit` has passed.
pub fn find_model_timed(
    k: &FoKernel,
    f: &ModalFormula,
    config: &SearchConfig,
    time_limit: Option<Duration>,
) -> Result<TimedOutcome> {
    let start = Instant::now();
    let mut timed_out = false;
    let outcome = find_model_with(k, f, config, |_: &SearchStats| match time_limit {
        Some(limit) if start.elapsed() >= limit => {
            timed_out = true;
            false
        }
        _ => true,
    })?;
    Ok(TimedOutcome {
        outcome,
        elapsed: start.elapsed(),
        timed_out,
    })
}

pub fn describe_status(outcome: &TimedOutcome) -> String {
    match &outcome.outcome.status {
        SearchStatus::Found { model, world } => match world {
            Some(w) => format!("found: {} worlds, witness world {w}", model.world_count()),
            None => format!("found: {} worlds, globally satisfied", model.world_count()),
        },
        SearchStatus::Exhausted => "exhausted".into(),
        SearchStatus::Aborted(AbortReason::FrameLimit(n)) => {
            format!("aborted: frame limit {n} reached")
        }
        SearchStatus::Aborted(AbortReason::NodeLimit(n)) => {
            format!("aborted: node limit {n} reached")
        }
        SearchStatus::Aborted(AbortReason::Interrupted) if outcome.timed_out => {
            "aborted: time limit reached".into()
        }
        SearchStatus::Aborted(AbortReason::Interrupted) => "aborted: interrupted".into(),
    }
}
