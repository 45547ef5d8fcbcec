//! The three studies: entanglement against coupling ratio, robustness to
//! static disorder, and robustness to a delayed second injection.

mod model;
mod peak;
pub mod search;
mod sweeps;

pub use model::{ChainModel, EofCurve};
pub use peak::{eof_trace, find_entangling_time, PeakResult, PeakSearch, DEFAULT_WINDOW_FACTOR};
pub use sweeps::{
    delay_sweep, ratio_sweep, DelayPoint, DelaySweep, DisorderSweep, RatioSweep, SweepRecord,
};
