//! Worker-distributed execution of the radix-2 transform.
//!
//! The input's `N` leaves are dealt to `nproc` workers in bit-reversed
//! tree order. Every worker first reduces its own branch locally; the
//! surviving workers then merge branches over `log2(nproc)` reduction
//! rounds, each round halving the active worker count, until the master
//! (worker 0) holds the full coefficient vector and applies the `1/N`
//! normalization.
//!
//! Branches travel between workers as a two-column real/imaginary matrix
//! ([`PackedMessage`]); the packing round-trip is bit-exact. Workers share
//! no state: the only communication is blocking, order-preserving,
//! point-to-point message passing behind the [`Transport`] trait. The
//! built-in transport simulates the links in process with one queue per
//! sender/receiver pair, so a networked backend can be swapped in without
//! touching the worker logic.
//!
//! Because every worker draws twiddles from the same table and performs
//! the same butterflies in the same tree order as the sequential path,
//! the output is bit-identical for every valid worker count.

use std::collections::HashMap;
use std::sync::mpsc;

use crate::complex::{
    bit_reverse_order, check_finite, log2, reverse_bits, Complex, TwiddleTable,
};
use crate::error::{Error, Result};
use crate::fft::{butterfly_level, butterfly_passes, normalize, reverse_and_scale};

pub type WorkerId = usize;

/// Per-worker slice of the topology: which tree branch this worker owns
/// and how many levels it computes before the reduction rounds begin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerPlan {
    /// Total number of workers (power of two).
    pub nproc: usize,
    /// This worker's label, `0 <= idproc < nproc`; worker 0 is the master.
    pub idproc: WorkerId,
    /// Number of samples.
    pub n: usize,
    /// Total butterfly levels, `log2(n)`.
    pub levels: usize,
    /// Last level at which every worker is still computing,
    /// `levels - log2(nproc)`.
    pub local_levels: usize,
    /// Sample indices of this worker's leaves, in tree (bit-reversed)
    /// order; a contiguous block of the global leaf layout.
    pub leaf_indices: Vec<usize>,
}

/// Wire representation of a coefficient vector: one real and one
/// imaginary column. Round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedMessage {
    pub rows: usize,
    pub col_re: Vec<f64>,
    pub col_im: Vec<f64>,
}

/// Splits a coefficient vector into the two-column wire layout, real
/// parts in the first column, imaginary parts in the second.
pub fn pack_message(coeffs: &[Complex]) -> Result<PackedMessage> {
    if coeffs.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PackedMessage {
        rows: coeffs.len(),
        col_re: coeffs.iter().map(|c| c.re).collect(),
        col_im: coeffs.iter().map(|c| c.im).collect(),
    })
}

/// Exact inverse of [`pack_message`].
pub fn unpack_message(msg: &PackedMessage) -> Result<Vec<Complex>> {
    if msg.col_re.len() != msg.rows || msg.col_im.len() != msg.rows {
        return Err(Error::CorruptMessage {
            rows: msg.rows,
            re_len: msg.col_re.len(),
            im_len: msg.col_im.len(),
        });
    }
    Ok(msg
        .col_re
        .iter()
        .zip(&msg.col_im)
        .map(|(&re, &im)| Complex::new(re, im))
        .collect())
}

/// One reduction round: the upper half of the still-active workers each
/// transmit their branch to the peer `active_workers` below them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRound {
    /// Tree level produced by the combines of this round.
    pub level: usize,
    /// Workers still computing after this round (`nproc_sup`).
    pub active_workers: usize,
    /// `(sender, receiver)` pairs, `sender = receiver + active_workers`.
    pub transfers: Vec<(WorkerId, WorkerId)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionSchedule {
    pub rounds: Vec<ReductionRound>,
}

impl ReductionSchedule {
    /// Total point-to-point transmissions in a full run; always
    /// `nproc - 1` since every non-master branch moves exactly once.
    pub fn total_transfers(&self) -> usize {
        self.rounds.iter().map(|r| r.transfers.len()).sum()
    }
}

/// Builds the per-worker plans and the reduction schedule for `n`
/// samples over `nproc` workers, both powers of two with `nproc <= n`.
///
/// Worker `k` owns the branch labelled `k`, i.e. the samples congruent
/// to `k` modulo `nproc`; in the left-to-right leaf layout that is the
/// contiguous block at position `reverse_bits(k, log2(nproc))`.
pub fn plan_topology(n: usize, nproc: usize) -> Result<(Vec<WorkerPlan>, ReductionSchedule)> {
    if !n.is_power_of_two() || !nproc.is_power_of_two() || nproc > n {
        return Err(Error::InvalidTopology { n, nproc });
    }
    let levels = log2(n);
    let worker_bits = log2(nproc);
    let local_levels = levels - worker_bits;
    let order = bit_reverse_order(n)?;
    let branch_len = n / nproc;

    let plans = (0..nproc)
        .map(|idproc| {
            let pos = reverse_bits(idproc, worker_bits);
            WorkerPlan {
                nproc,
                idproc,
                n,
                levels,
                local_levels,
                leaf_indices: order[pos * branch_len..(pos + 1) * branch_len].to_vec(),
            }
        })
        .collect();

    let mut rounds = Vec::with_capacity(worker_bits);
    let mut active = nproc / 2;
    let mut level = local_levels + 1;
    while active >= 1 {
        rounds.push(ReductionRound {
            level,
            active_workers: active,
            transfers: (0..active).map(|r| (r + active, r)).collect(),
        });
        active /= 2;
        level += 1;
    }

    Ok((plans, ReductionSchedule { rounds }))
}

/// Computes this worker's branch coefficients: the unnormalized
/// butterfly reduction of its `n / nproc` leaves.
pub fn local_branch_fft(plan: &WorkerPlan, samples: &[Complex]) -> Result<Vec<Complex>> {
    if samples.len() != plan.n {
        return Err(Error::LengthMismatch {
            expected: plan.n,
            actual: samples.len(),
        });
    }
    check_finite(samples)?;
    let table = TwiddleTable::new(plan.n)?;
    let mut branch: Vec<Complex> = plan.leaf_indices.iter().map(|&j| samples[j]).collect();
    butterfly_passes(&mut branch, &table);
    Ok(branch)
}

/// Blocking, order-preserving point-to-point message passing between
/// workers. Implementations must deliver messages from one sender to one
/// receiver in the order they were sent.
pub trait Transport {
    fn send(&mut self, to: WorkerId, msg: PackedMessage) -> Result<()>;
    fn recv(&mut self, from: WorkerId) -> Result<PackedMessage>;
}

/// In-process transport: one FIFO queue per (sender, receiver) pair of
/// the schedule.
struct ChannelEndpoint {
    id: WorkerId,
    senders: HashMap<WorkerId, mpsc::Sender<PackedMessage>>,
    receivers: HashMap<WorkerId, mpsc::Receiver<PackedMessage>>,
}

impl Transport for ChannelEndpoint {
    fn send(&mut self, to: WorkerId, msg: PackedMessage) -> Result<()> {
        let tx = self
            .senders
            .get(&to)
            .ok_or(Error::NoChannel { from: self.id, to })?;
        tx.send(msg).map_err(|_| Error::WorkerFailed(to))
    }

    fn recv(&mut self, from: WorkerId) -> Result<PackedMessage> {
        let rx = self
            .receivers
            .get(&from)
            .ok_or(Error::NoChannel { from, to: self.id })?;
        rx.recv().map_err(|_| Error::WorkerFailed(from))
    }
}

fn channel_mesh(schedule: &ReductionSchedule, nproc: usize) -> Vec<ChannelEndpoint> {
    let mut endpoints: Vec<ChannelEndpoint> = (0..nproc)
        .map(|id| ChannelEndpoint {
            id,
            senders: HashMap::new(),
            receivers: HashMap::new(),
        })
        .collect();
    for round in &schedule.rounds {
        for &(from, to) in &round.transfers {
            let (tx, rx) = mpsc::channel();
            endpoints[from].senders.insert(to, tx);
            endpoints[to].receivers.insert(from, rx);
        }
    }
    endpoints
}

/// Instrumentation gathered by one worker; counters are worker-local and
/// merged only after the run completes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerStats {
    pub idproc: WorkerId,
    /// Twiddle products charged per tree level (index `l - 1` holds
    /// level `l`); zero for levels this worker sat out.
    pub level_mults: Vec<u64>,
    pub messages_sent: usize,
    /// Index of the schedule round at which this worker transmitted its
    /// branch and went idle; `None` for the master.
    pub exit_round: Option<usize>,
}

/// Merged per-run instrumentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStats {
    pub levels: usize,
    pub workers: Vec<WorkerStats>,
}

impl RunStats {
    pub fn total_messages(&self) -> usize {
        self.workers.iter().map(|w| w.messages_sent).sum()
    }

    /// Critical-path multiplication count: per level, the maximum over
    /// workers, summed over all levels.
    pub fn critical_path_mults(&self) -> u64 {
        (0..self.levels)
            .map(|l| {
                self.workers
                    .iter()
                    .map(|w| w.level_mults[l])
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    }
}

/// Outcome of one worker's run; `coefficients` is populated only on the
/// master.
#[derive(Debug)]
pub struct WorkerOutcome {
    pub coefficients: Option<Vec<Complex>>,
    pub stats: WorkerStats,
}

/// Executes one worker's share of the protocol over the given transport:
/// local branch butterflies, then for each reduction round either
/// receive-unpack-combine (receiver side performs the butterfly) or
/// pack-send-idle.
pub fn run_worker<T: Transport>(
    plan: &WorkerPlan,
    schedule: &ReductionSchedule,
    samples: &[Complex],
    table: &TwiddleTable,
    transport: &mut T,
) -> Result<WorkerOutcome> {
    let mut stats = WorkerStats {
        idproc: plan.idproc,
        level_mults: vec![0; plan.levels],
        messages_sent: 0,
        exit_round: None,
    };

    let mut branch: Vec<Complex> = plan.leaf_indices.iter().map(|&j| samples[j]).collect();
    let local_counts = butterfly_passes(&mut branch, table);
    stats.level_mults[..local_counts.len()].copy_from_slice(&local_counts);

    for (round_idx, round) in schedule.rounds.iter().enumerate() {
        if plan.idproc < round.active_workers {
            let peer = plan.idproc + round.active_workers;
            let received = unpack_message(&transport.recv(peer)?)?;
            if received.len() != branch.len() {
                return Err(Error::LengthMismatch {
                    expected: branch.len(),
                    actual: received.len(),
                });
            }
            // Own branch is the even child, the received branch the odd
            // child of the next-level polynomial.
            branch.extend(received);
            let mut mults = 0;
            butterfly_level(&mut branch, table, &mut mults);
            stats.level_mults[round.level - 1] = mults;
        } else {
            let peer = plan.idproc - round.active_workers;
            transport.send(peer, pack_message(&branch)?)?;
            stats.messages_sent += 1;
            stats.exit_round = Some(round_idx);
            break;
        }
    }

    let coefficients = if plan.idproc == 0 {
        normalize(&mut branch, plan.n);
        Some(branch)
    } else {
        None
    };
    Ok(WorkerOutcome {
        coefficients,
        stats,
    })
}

/// Runs the transform over `nproc` concurrent workers and returns the
/// master's coefficient vector together with the merged instrumentation.
///
/// Any worker failure aborts the whole run; there is no partial result.
pub fn parallel_fft_with_stats(
    samples: &[Complex],
    nproc: usize,
) -> Result<(Vec<Complex>, RunStats)> {
    check_finite(samples)?;
    let n = samples.len();
    let (plans, schedule) = plan_topology(n, nproc)?;
    let table = TwiddleTable::new(n)?;
    let endpoints = channel_mesh(&schedule, nproc);

    let outcomes: Vec<Result<WorkerOutcome>> = std::thread::scope(|scope| {
        let schedule = &schedule;
        let table = &table;
        let handles: Vec<_> = plans
            .into_iter()
            .zip(endpoints)
            .map(|(plan, mut endpoint)| {
                scope.spawn(move || run_worker(&plan, schedule, samples, table, &mut endpoint))
            })
            .collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(id, handle)| {
                handle
                    .join()
                    .unwrap_or_else(|_| Err(Error::WorkerFailed(id)))
            })
            .collect()
    });

    let mut coefficients = None;
    let mut workers = Vec::with_capacity(nproc);
    for outcome in outcomes {
        let outcome = outcome?;
        if let Some(c) = outcome.coefficients {
            coefficients = Some(c);
        }
        workers.push(outcome.stats);
    }
    let coefficients = coefficients.ok_or(Error::WorkerFailed(0))?;
    Ok((
        coefficients,
        RunStats {
            levels: log2(n),
            workers,
        },
    ))
}

/// Worker-distributed forward transform; output is bit-identical to
/// [`crate::fft`] for every valid `nproc`.
pub fn parallel_fft(samples: &[Complex], nproc: usize) -> Result<Vec<Complex>> {
    parallel_fft_with_stats(samples, nproc).map(|(c, _)| c)
}

/// Worker-distributed inverse transform, derived from the forward run
/// exactly as [`crate::ifft`] derives it from [`crate::fft`].
pub fn parallel_ifft(coeffs: &[Complex], nproc: usize) -> Result<Vec<Complex>> {
    let spectrum = parallel_fft(coeffs, nproc)?;
    Ok(reverse_and_scale(&spectrum))
}
