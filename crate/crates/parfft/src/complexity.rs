//! Arithmetic-count model for the transform.
//!
//! "Multiplication" means one complex twiddle product charged per
//! butterfly output, trivial `w^0` products included; only that
//! convention makes the model match the instrumented engine. The
//! worker-distributed count is a critical-path count: per level, the
//! per-level cost is divided by the number of workers still active.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::parallel::parallel_fft_with_stats;

/// One row of the comparative product counts for length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub n: u64,
    /// Products needed by the direct quadratic evaluation.
    pub n_squared: u64,
    /// Sequential fast-transform products, `n * log2(n)`.
    pub seq_mults: u64,
    /// Critical-path products over `2^log_workers` workers.
    pub par_mults: u64,
    /// `seq_mults / par_mults`.
    pub ratio: f64,
}

fn check_levels(levels: u32, log_workers: u32) -> Result<()> {
    if log_workers > levels || levels > 57 {
        return Err(Error::InvalidParameters(format!(
            "need log_workers <= levels <= 57, got levels={levels} log_workers={log_workers}"
        )));
    }
    Ok(())
}

/// Exact critical-path multiplication count for a transform of
/// `2^levels` samples over `2^log_workers` workers:
/// `(levels - log_workers) * 2^(levels - log_workers)` products for the
/// branch levels where every worker computes, plus `2^(levels -
/// log_workers + i)` for the i-th reduction level.
pub fn count_parallel_mults(levels: u32, log_workers: u32) -> Result<u64> {
    check_levels(levels, log_workers)?;
    let local_levels = (levels - log_workers) as u64;
    let branch = 1u64 << (levels - log_workers);
    let mut total = local_levels * branch;
    for i in 1..=log_workers {
        total += branch << i;
    }
    Ok(total)
}

/// Sequential fast-transform count `n * log2(n)` for a power-of-two `n`.
pub fn count_sequential_mults(n: u64) -> Result<u64> {
    if !n.is_power_of_two() || n > 1 << 57 {
        return Err(Error::InvalidSize(n as usize));
    }
    Ok(n * n.trailing_zeros() as u64)
}

/// Ratio between the sequential and worker-distributed counts,
/// `levels / ((levels - log_workers) * 2^-log_workers +
/// sum_{i=1..log_workers} 2^(-log_workers + i))`.
///
/// Equals `count_sequential_mults / count_parallel_mults` exactly in
/// exact arithmetic; `1.0` when a single worker runs.
pub fn speedup_ratio(levels: u32, log_workers: u32) -> Result<f64> {
    check_levels(levels, log_workers)?;
    if levels == 0 {
        return Ok(1.0);
    }
    let m = levels as f64;
    let l = log_workers as i32;
    let mut denom = (m - l as f64) * (2f64).powi(-l);
    for i in 1..=l {
        denom += (2f64).powi(-l + i);
    }
    Ok(m / denom)
}

/// Rounds half-up to two decimal places; the convention used when
/// reporting ratios.
pub fn round_half_up_2dp(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Builds the count row for `n` samples over `2^log_workers` workers.
pub fn count_report(n: u64, log_workers: u32) -> Result<CountReport> {
    if !n.is_power_of_two() {
        return Err(Error::InvalidSize(n as usize));
    }
    let levels = n.trailing_zeros();
    let n_squared = n
        .checked_mul(n)
        .ok_or_else(|| Error::InvalidParameters(format!("n = {n} overflows the n^2 column")))?;
    Ok(CountReport {
        n,
        n_squared,
        seq_mults: count_sequential_mults(n)?,
        par_mults: count_parallel_mults(levels, log_workers)?,
        ratio: speedup_ratio(levels, log_workers)?,
    })
}

/// The four comparative rows for `n` in {512, 2048, 8192, 32768} over
/// four workers.
pub fn table1_report() -> Vec<CountReport> {
    [512u64, 2048, 8192, 32768]
        .iter()
        .map(|&n| count_report(n, 2).expect("static sizes are valid"))
        .collect()
}

/// Runs the worker engine with its multiplication counters enabled and
/// returns the merged critical-path count; always equals
/// `count_parallel_mults(log2(n), log2(nproc))`.
///
/// The count is structural, so a zero input serves.
pub fn measured_mult_count(n: usize, nproc: usize) -> Result<u64> {
    let samples = vec![Complex::new(0.0, 0.0); n];
    let (_, stats) = parallel_fft_with_stats(&samples, nproc)?;
    Ok(stats.critical_path_mults())
}

/// Renders rows as a whitespace-aligned text table; a `None` in the
/// measured column prints as `-`.
pub fn format_count_table(rows: &[(CountReport, Option<u64>)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>8} {:>12} {:>10} {:>10} {:>7} {:>10}\n",
        "N", "N^2", "NLog2N", "Pfp", "RSP", "measured"
    ));
    for (report, measured) in rows {
        let measured = match measured {
            Some(count) => count.to_string(),
            None => "-".to_string(),
        };
        out.push_str(&format!(
            "{:>8} {:>12} {:>10} {:>10} {:>7.2} {:>10}\n",
            report.n,
            report.n_squared,
            report.seq_mults,
            report.par_mults,
            round_half_up_2dp(report.ratio),
            measured
        ));
    }
    out
}
