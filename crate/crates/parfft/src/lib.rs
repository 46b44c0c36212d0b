//! Radix-2 fast Fourier transform with an explicit message-passing
//! execution engine.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`TwiddleTable`] and [`bit_reverse_order`]: the shared roots of
//!   unity and the leaf layout of the butterfly tree.
//! - [`fft`] / [`ifft`] / [`dft_oracle`] / [`eval_exp_poly`]: sequential
//!   transforms with the `1/N` normalization on the forward direction;
//!   the inverse rides on the forward transform through index reversal.
//! - [`parallel_fft`] and friends: the same transform distributed over
//!   `2^l` workers that exchange two-column packed branches over
//!   point-to-point queues, halving the active worker count each
//!   reduction round. Output is bit-identical to the sequential path.
//! - [`count_parallel_mults`] / [`measured_mult_count`] /
//!   [`table1_report`]: the exact multiplication-count model and the
//!   instrumentation that validates it against the engine.
//! - [`fft2d`] / [`ifft2d`]: row-column 2D transforms.
//! - [`filter_image`] and the PGM codec: the frequency-domain disk
//!   filter workflow for grayscale images.

mod complex;
mod complexity;
mod error;
mod fft;
mod fft2d;
mod image;
mod parallel;
mod pgm;

pub use complex::{bit_reverse_order, Complex, TwiddleTable};
pub use complexity::{
    count_parallel_mults, count_report, count_sequential_mults, format_count_table,
    measured_mult_count, round_half_up_2dp, speedup_ratio, table1_report, CountReport,
};
pub use error::{Error, Result};
pub use fft::{dft_oracle, eval_exp_poly, fft, ifft};
pub use fft2d::{
    dft2d_oracle, fft2d, fft2d_with_workers, ifft2d, ifft2d_with_workers, ComplexGrid,
};
pub use image::{
    apply_filter, build_filter_mask, center_shift, filter_image, log_spectrum_image, pad_pow2,
    spectrum, FilterMode, FilterOutcome, FilterSpec, GrayImage, PaddedImage, RealGrid,
};
pub use parallel::{
    local_branch_fft, pack_message, parallel_fft, parallel_fft_with_stats, parallel_ifft,
    plan_topology, run_worker, unpack_message, PackedMessage, ReductionRound, ReductionSchedule,
    RunStats, Transport, WorkerId, WorkerOutcome, WorkerPlan, WorkerStats,
};
pub use pgm::{read_pgm, write_pgm};
