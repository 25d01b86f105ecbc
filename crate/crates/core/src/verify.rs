//! Verifiers for the size bounds on sets of prescribed minimum degree.
//!
//! Each verifier scans every nonempty subset of `Q_n` (or a seeded sample of
//! them), checks one claim per set, and returns a [`Certificate`]. Scans run
//! on the rayon pool; partial results merge by exact minimum, so the
//! certificate does not depend on the worker count. A refuting set is the
//! numerically smallest failing bitmap, or in sampled mode the first failing
//! sample in sample order.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certificate::{
    Certificate, ClaimId, DegreeRow, HistogramRow, Mode, Params, RowStatus, SizeCount, Verdict,
};
use crate::constructions::{gap_threshold, is_feasible, min_irreducible_size};
use crate::cube::{CubeDim, Subcube, VertexSet};
use crate::dyadic::Dyadic;
use crate::error::{CubeError, Result};
use crate::search::small::SmallCube;
use crate::search::{
    min_size_search, with_threads, DegreeMode, SearchConfig, SearchOutcome, Strategy, BNB_MAX_N,
    EXHAUSTIVE_MAX_N,
};

/// Largest `n` for exhaustive enumeration of (set, subcube) pairs.
pub const PAIR_EXHAUSTIVE_MAX_N: u32 = 3;

/// Largest `n` for sampled verification.
pub const SAMPLED_MAX_N: u32 = BNB_MAX_N;

pub const DEFAULT_SEED: u64 = 0x5eed_2016;
pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Samples drawn from one generator stream. Fixed so the sample sequence
/// does not depend on the worker count.
const SAMPLE_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `|S| >= 2^{δ(S)}`, with equality exactly for subcubes.
    Simon,
    /// Least size of an irreducible set with `δ = d`, for every `d`.
    Main,
    /// No size strictly between `2^d` and `3 · 2^{d-1}`.
    Gap,
    /// `|S| = 2^d` or `|S| >= min_{d < i <= n} S(i, d)`.
    LemmaMinsize,
    /// `|S| >= 2^{d'}` where `d'` is the least degree over `S ∩ G_0`.
    LemmaExtended,
    /// `|S \ G_l| >= 2^{d'} - 2^{d' - (n - l)}` for subcubes `G_l ⊆ S ∩ G_1`.
    LemmaFancy,
}

impl Claim {
    pub const ALL: [Claim; 6] = [
        Claim::Simon,
        Claim::Main,
        Claim::Gap,
        Claim::LemmaMinsize,
        Claim::LemmaExtended,
        Claim::LemmaFancy,
    ];

    pub fn id(self) -> ClaimId {
        match self {
            Claim::Simon => ClaimId::Simon,
            Claim::Main => ClaimId::Main,
            Claim::Gap => ClaimId::Gap,
            Claim::LemmaMinsize => ClaimId::LemmaMinsize,
            Claim::LemmaExtended => ClaimId::LemmaExtended,
            Claim::LemmaFancy => ClaimId::LemmaFancy,
        }
    }

    /// Accepts `lemma-minsize` as well as `lemma_minsize`.
    pub fn parse(name: &str) -> Option<Claim> {
        let name = name.replace('-', "_");
        Claim::ALL.into_iter().find(|c| c.id().as_str() == name)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Worker threads; 0 uses the global pool. Never affects results.
    pub threads: usize,
    /// Search strategy for [`Claim::Main`]; `None` picks exhaustive up to
    /// `n = 4` and branch and bound above.
    pub strategy: Option<Strategy>,
    /// Node budget per degree for branch-and-bound runs.
    pub budget: Option<u64>,
    pub seed: u64,
    pub samples: u64,
    /// Required for any `n` above the exhaustive cap.
    pub allow_large: bool,
    /// Earlier certificate whose finished rows are reused.
    pub resume: Option<Certificate>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            threads: 0,
            strategy: None,
            budget: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            allow_large: false,
            resume: None,
        }
    }
}

/// Replaceable kernels, so tests can check that a broken kernel is caught.
#[derive(Debug, Clone, Copy)]
pub struct Kernels {
    pub min_degree: fn(&SmallCube, u64) -> Option<u32>,
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            min_degree: SmallCube::min_degree,
        }
    }
}

pub fn verify(claim: Claim, n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify_with_kernels(claim, n, opts, &Kernels::default())
}

pub fn verify_with_kernels(
    claim: Claim,
    n: u32,
    opts: &VerifyOptions,
    kernels: &Kernels,
) -> Result<Certificate> {
    CubeDim::new(n)?;
    let start = Instant::now();
    let mut cert = with_threads(opts.threads, || match claim {
        Claim::Simon => simon(n, kernels),
        Claim::Main => main_claim(n, opts),
        Claim::Gap => gap(n, kernels),
        Claim::LemmaMinsize => lemma_minsize(n, kernels),
        Claim::LemmaExtended => lemma_extended(n, opts),
        Claim::LemmaFancy => lemma_fancy(n, opts),
    })?;
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

pub fn verify_simon(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::Simon, n, opts)
}

pub fn verify_main(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::Main, n, opts)
}

pub fn verify_gap(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::Gap, n, opts)
}

pub fn verify_lemma_minsize(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::LemmaMinsize, n, opts)
}

pub fn verify_lemma_extended(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::LemmaExtended, n, opts)
}

pub fn verify_lemma_fancy(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    verify(Claim::LemmaFancy, n, opts)
}

/// Runs one search and records it as a certificate.
pub fn certify_search(cfg: &SearchConfig) -> Result<Certificate> {
    let start = Instant::now();
    let outcome = min_size_search(cfg)?;
    let mode = match cfg.strategy {
        Strategy::Exhaustive => Mode::Exhaustive,
        Strategy::CanonicalBnb => Mode::CanonicalBnb,
    };
    let params = Params {
        n: cfg.n.n(),
        d: Some(cfg.d),
        degree_mode: cfg.degree_mode,
        irreducible: cfg.require_irreducible,
    };
    let mut cert = Certificate::new(ClaimId::Search, params, mode);
    cert.subsets_examined = outcome.examined();
    match outcome {
        SearchOutcome::Found { size, witness, .. } => {
            cert.extremal_size = Some(size);
            cert.witnesses.push(witness.to_lines());
        }
        SearchOutcome::Infeasible { .. } => cert.verdict = Verdict::Infeasible,
        SearchOutcome::BudgetExceeded { lower_bound, .. } => {
            cert.verdict = Verdict::Partial;
            cert.counts.insert("lower_bound".into(), lower_bound);
        }
    }
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

fn cap(n: u32, cap: u32, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(CubeError::CapExceeded { n, cap, what });
    }
    Ok(())
}

fn at_least_one(n: u32) -> Result<()> {
    if n == 0 {
        return Err(CubeError::DimensionTooSmall { n, min: 1 });
    }
    Ok(())
}

fn large_allowed(n: u32, opts: &VerifyOptions) -> Result<()> {
    if !opts.allow_large {
        cap(n, EXHAUSTIVE_MAX_N, "verification without allow_large")?;
    }
    Ok(())
}

fn keep_min<T: Ord>(slot: &mut Option<T>, cand: T) {
    if slot.as_ref().is_none_or(|cur| cand < *cur) {
        *slot = Some(cand);
    }
}

fn merge_min<T: Ord>(slot: &mut Option<T>, other: Option<T>) {
    if let Some(cand) = other {
        keep_min(slot, cand);
    }
}

trait Merge: Default + Send {
    fn merge(&mut self, other: Self);
}

/// Folds `visit` over every nonempty subset of `Q_n`, `n <= 4`.
fn scan<A: Merge>(cube: &SmallCube, visit: impl Fn(&mut A, u64) + Sync) -> A {
    let total = cube.subset_count().expect("scans need n <= 4");
    (1..total)
        .into_par_iter()
        .fold(A::default, |mut acc, bits| {
            visit(&mut acc, bits);
            acc
        })
        .reduce(A::default, |mut a, b| {
            a.merge(b);
            a
        })
}

/// Folds `visit` over `samples` seeded draws. Draw `i` comes from stream
/// `i / SAMPLE_CHUNK` of the generator seeded with `seed`.
fn sample_scan<A: Merge>(
    samples: u64,
    seed: u64,
    visit: impl Fn(&mut A, u64, &mut ChaCha8Rng) + Sync,
) -> A {
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let mut acc = A::default();
            let end = ((chunk + 1) * SAMPLE_CHUNK).min(samples);
            for i in chunk * SAMPLE_CHUNK..end {
                visit(&mut acc, i, &mut rng);
            }
            acc
        })
        .reduce(A::default, |mut a, b| {
            a.merge(b);
            a
        })
}

/// A random set whose density is drawn from `1/2, 1/4, 1/8, 1/16`, so that
/// small and sparse sets are reached as well as dense ones.
fn random_bits(cube: &SmallCube, rng: &mut ChaCha8Rng) -> u64 {
    let r = rng.gen_range(1..=4u32);
    let mut bits = 0u64;
    for v in 0..(1u32 << cube.n()) {
        if rng.gen_range(0..1u32 << r) == 0 {
            bits |= 1 << v;
        }
    }
    bits
}

/// Adds a random vertex of `G_0` if `bits` misses it.
fn meet_low_half(cube: &SmallCube, bits: u64, rng: &mut ChaCha8Rng) -> u64 {
    if bits & cube.half(0, false) != 0 {
        return bits;
    }
    bits | 1 << (2 * rng.gen_range(0..1u32 << (cube.n() - 1)))
}

fn set(n: u32, bits: u64) -> VertexSet {
    VertexSet::from_u64(CubeDim::new(n).expect("n <= 6"), bits)
}

fn lines(n: u32, bits: u64) -> Vec<String> {
    set(n, bits).to_lines()
}

fn params(n: u32, degree_mode: DegreeMode, irreducible: bool) -> Params {
    Params {
        n,
        d: None,
        degree_mode,
        irreducible,
    }
}

fn refute(cert: &mut Certificate, n: u32, bits: u64) {
    cert.verdict = Verdict::Refuted;
    cert.counterexample = Some(lines(n, bits));
}

#[derive(Default)]
struct SimonScan {
    equality: u64,
    subcubes: u64,
    /// Least `(size, bits)` per minimum degree.
    best: [Option<(u32, u64)>; 7],
    bad: Option<u64>,
}

impl Merge for SimonScan {
    fn merge(&mut self, other: Self) {
        self.equality += other.equality;
        self.subcubes += other.subcubes;
        for (a, b) in self.best.iter_mut().zip(other.best) {
            merge_min(a, b);
        }
        merge_min(&mut self.bad, other.bad);
    }
}

fn simon(n: u32, kernels: &Kernels) -> Result<Certificate> {
    cap(n, EXHAUSTIVE_MAX_N, "exhaustive verification")?;
    let cube = SmallCube::new(n);
    let acc = scan::<SimonScan>(&cube, |acc, bits| {
        let size = bits.count_ones();
        let sub = cube.subcube_dim(bits);
        if sub.is_some() {
            acc.subcubes += 1;
        }
        let delta = match (kernels.min_degree)(&cube, bits) {
            Some(delta) if delta <= n => delta,
            _ => return keep_min(&mut acc.bad, bits),
        };
        let tight = size == 1 << delta;
        if tight {
            acc.equality += 1;
        }
        if size < 1 << delta || tight != (sub == Some(delta)) {
            keep_min(&mut acc.bad, bits);
        }
        keep_min(&mut acc.best[delta as usize], (size, bits));
    });

    let mut cert = Certificate::new(
        ClaimId::Simon,
        params(n, DegreeMode::AtLeast, false),
        Mode::Exhaustive,
    );
    cert.subsets_examined = cube.subset_count().expect("n <= 4") - 1;
    cert.counts.insert("equality_cases".into(), acc.equality);
    cert.counts.insert("subcubes".into(), acc.subcubes);
    for d in 0..=n {
        let best = acc.best[d as usize..=n as usize]
            .iter()
            .flatten()
            .min()
            .copied();
        let expected = 1u64 << d;
        let found = best.map(|(size, _)| u64::from(size));
        cert.per_d.push(DegreeRow {
            d,
            expected: Some(expected),
            found,
            status: if found == Some(expected) {
                RowStatus::Confirmed
            } else {
                RowStatus::Mismatch
            },
            witness: best.map(|(_, bits)| lines(n, bits)),
            examined: cert.subsets_examined,
            lower_bound: None,
        });
        if let Some((_, bits)) = best {
            cert.witnesses.push(lines(n, bits));
        }
    }
    if let Some(bits) = acc.bad {
        refute(&mut cert, n, bits);
    }
    Ok(cert)
}

#[derive(Default)]
struct GapScan {
    /// `hist[δ][size]`.
    hist: [[u64; 17]; 5],
    bad: Option<u64>,
}

impl Merge for GapScan {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.hist.iter_mut().zip(other.hist) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        merge_min(&mut self.bad, other.bad);
    }
}

fn gap_violation(size: u64, delta: u32, subcube_dim: Option<u32>) -> bool {
    let floor = 1u64 << delta;
    size < floor
        || (size == floor && subcube_dim != Some(delta))
        || (size > floor && Dyadic::from(size) < gap_threshold(delta))
}

fn gap(n: u32, kernels: &Kernels) -> Result<Certificate> {
    cap(n, EXHAUSTIVE_MAX_N, "exhaustive verification")?;
    let cube = SmallCube::new(n);
    let acc = scan::<GapScan>(&cube, |acc, bits| {
        let size = bits.count_ones();
        let delta = match (kernels.min_degree)(&cube, bits) {
            Some(delta) if delta <= n => delta,
            _ => return keep_min(&mut acc.bad, bits),
        };
        acc.hist[delta as usize][size as usize] += 1;
        if gap_violation(size.into(), delta, cube.subcube_dim(bits)) {
            keep_min(&mut acc.bad, bits);
        }
    });

    let mut cert = Certificate::new(
        ClaimId::Gap,
        params(n, DegreeMode::Exact, false),
        Mode::Exhaustive,
    );
    cert.subsets_examined = cube.subset_count().expect("n <= 4") - 1;
    for d in 0..=n {
        let row = &acc.hist[d as usize];
        let sizes: Vec<SizeCount> = (0..row.len())
            .filter(|&s| row[s] > 0)
            .map(|s| SizeCount {
                size: s as u64,
                count: row[s],
            })
            .collect();
        let floor = 1u64 << d;
        let expected = gap_threshold(d).ceil() as u64;
        let above = sizes.iter().map(|s| s.size).find(|&s| s > floor);
        cert.per_d.push(DegreeRow {
            d,
            expected: Some(expected),
            found: above,
            status: if above.is_none_or(|s| s >= expected) {
                RowStatus::Confirmed
            } else {
                RowStatus::Mismatch
            },
            witness: None,
            examined: sizes.iter().map(|s| s.count).sum(),
            lower_bound: None,
        });
        if !sizes.is_empty() {
            cert.histogram.push(HistogramRow { degree: d, sizes });
        }
    }
    cert.notes.push("equality case read as |V| = 2^d".into());
    if let Some(bits) = acc.bad {
        refute(&mut cert, n, bits);
    }
    Ok(cert)
}

/// `min_{d < i <= n} S(i, d)` over feasible `i`.
pub fn minsize_rhs(n: u32, d: u32) -> Option<u64> {
    (d + 1..=n)
        .filter(|&i| is_feasible(i, d))
        .filter_map(|i| min_irreducible_size(i, d).ok())
        .min()
}

fn minsize_holds(n: u32, size: u64, delta: u32, rhs: &[Option<u64>]) -> bool {
    size == 1 << delta || (delta < n && rhs[delta as usize].is_some_and(|r| size >= r))
}

#[derive(Default)]
struct CountScan {
    qualifying: u64,
    tight: u64,
    bad: Option<u64>,
}

impl Merge for CountScan {
    fn merge(&mut self, other: Self) {
        self.qualifying += other.qualifying;
        self.tight += other.tight;
        merge_min(&mut self.bad, other.bad);
    }
}

fn lemma_minsize(n: u32, kernels: &Kernels) -> Result<Certificate> {
    cap(n, EXHAUSTIVE_MAX_N, "exhaustive verification")?;
    let cube = SmallCube::new(n);
    let rhs: Vec<Option<u64>> = (0..=n).map(|d| minsize_rhs(n, d)).collect();
    let acc = scan::<CountScan>(&cube, |acc, bits| {
        let size = u64::from(bits.count_ones());
        let delta = match (kernels.min_degree)(&cube, bits) {
            Some(delta) if delta <= n => delta,
            _ => return keep_min(&mut acc.bad, bits),
        };
        acc.qualifying += 1;
        if size == 1 << delta {
            acc.tight += 1;
        }
        if !minsize_holds(n, size, delta, &rhs) {
            keep_min(&mut acc.bad, bits);
        }
    });

    let mut cert = Certificate::new(
        ClaimId::LemmaMinsize,
        params(n, DegreeMode::Exact, false),
        Mode::Exhaustive,
    );
    cert.subsets_examined = cube.subset_count().expect("n <= 4") - 1;
    cert.counts.insert("sets_of_size_2^d".into(), acc.tight);
    for d in 0..n {
        // the right-hand side should equal the gap threshold, rounded up
        let expected = gap_threshold(d).ceil() as u64;
        let found = rhs[d as usize];
        cert.per_d.push(DegreeRow {
            d,
            expected: Some(expected),
            found,
            status: match found {
                Some(r) if r == expected => RowStatus::Confirmed,
                Some(_) => RowStatus::Mismatch,
                None => RowStatus::Infeasible,
            },
            witness: None,
            examined: 0,
            lower_bound: None,
        });
    }
    if let Some(bits) = acc.bad {
        refute(&mut cert, n, bits);
    }
    Ok(cert)
}

/// Least degree in `S` over the members of `S ∩ G_0`, if there are any.
fn low_half_degree(cube: &SmallCube, bits: u64) -> Option<u32> {
    let meet = bits & cube.half(0, false);
    if meet == 0 {
        return None;
    }
    cube.min_count(&cube.count_planes(bits), meet)
}

#[derive(Default)]
struct SampleScan {
    qualifying: u64,
    tight: u64,
    pairs: u64,
    /// `(sample index or bits, bits, subcube index)`.
    bad: Option<(u64, u64, usize)>,
}

impl Merge for SampleScan {
    fn merge(&mut self, other: Self) {
        self.qualifying += other.qualifying;
        self.tight += other.tight;
        self.pairs += other.pairs;
        merge_min(&mut self.bad, other.bad);
    }
}

fn lemma_extended(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    at_least_one(n)?;
    cap(n, SAMPLED_MAX_N, "sampled verification")?;
    large_allowed(n, opts)?;
    let cube = SmallCube::new(n);
    let check = |acc: &mut SampleScan, key: u64, bits: u64| {
        if let Some(low) = low_half_degree(&cube, bits) {
            acc.qualifying += 1;
            let size = bits.count_ones();
            if size == 1 << low {
                acc.tight += 1;
            }
            if size < 1 << low {
                keep_min(&mut acc.bad, (key, bits, 0));
            }
        }
    };
    let exhaustive = n <= EXHAUSTIVE_MAX_N;
    let acc: SampleScan = if exhaustive {
        scan(&cube, |acc, bits| check(acc, bits, bits))
    } else {
        sample_scan(opts.samples, opts.seed, |acc, i, rng| {
            let bits = meet_low_half(&cube, random_bits(&cube, rng), rng);
            check(acc, i, bits)
        })
    };

    let mode = if exhaustive {
        Mode::Exhaustive
    } else {
        Mode::Sampled
    };
    let mut cert = Certificate::new(
        ClaimId::LemmaExtended,
        params(n, DegreeMode::AtLeast, false),
        mode,
    );
    if exhaustive {
        cert.subsets_examined = cube.subset_count().expect("n <= 4") - 1;
    } else {
        cert.subsets_examined = opts.samples;
        cert.samples = Some(opts.samples);
        cert.seed = Some(opts.seed);
        cert.notes.push("sampled: evidence, not proof".into());
    }
    cert.counts
        .insert("qualifying_subsets".into(), acc.qualifying);
    cert.counts.insert("tight_subsets".into(), acc.tight);
    if let Some((_, bits, _)) = acc.bad {
        refute(&mut cert, n, bits);
    }
    Ok(cert)
}

/// Subcubes inside `G_1`, as `(pattern, member bits)`, in a fixed order.
fn subcubes_in_high_half(cube: &SmallCube) -> Vec<(Subcube, u64)> {
    let n = cube.n();
    let dim = CubeDim::new(n).expect("n <= 6");
    (0..3u32.pow(n - 1))
        .map(|code| {
            let (mut mask, mut values, mut bits) = (1u32, 1u32, cube.half(0, true));
            let mut rest = code;
            for c in 1..n {
                match rest % 3 {
                    0 => {}
                    digit => {
                        mask |= 1 << c;
                        let value = digit == 2;
                        if value {
                            values |= 1 << c;
                        }
                        bits &= cube.half(c, value);
                    }
                }
                rest /= 3;
            }
            (
                Subcube::new(dim, mask, values).expect("values within mask"),
                bits,
            )
        })
        .collect()
}

/// `|S \ G_l| · 2^{n-l} >= 2^{d'+n-l} - 2^{d'}`, with `n - l` the number of
/// fixed coordinates.
fn fancy_holds(outside: u64, low: u32, fixed: u32) -> bool {
    outside << fixed >= (1u64 << (low + fixed)) - (1u64 << low)
}

fn lemma_fancy(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    at_least_one(n)?;
    cap(n, SAMPLED_MAX_N, "sampled verification")?;
    large_allowed(n, opts)?;
    let cube = SmallCube::new(n);
    let subs = subcubes_in_high_half(&cube);
    let check =
        |acc: &mut SampleScan, key: u64, bits: u64, which: &mut dyn Iterator<Item = usize>| {
            let Some(low) = low_half_degree(&cube, bits) else {
                return;
            };
            acc.qualifying += 1;
            let size = bits.count_ones();
            for k in which {
                let (sc, members) = &subs[k];
                if members & !bits != 0 {
                    continue;
                }
                acc.pairs += 1;
                let outside = u64::from(size - members.count_ones());
                if !fancy_holds(outside, low, sc.fixed_mask().count_ones()) {
                    keep_min(&mut acc.bad, (key, bits, k));
                }
            }
        };
    let exhaustive = n <= PAIR_EXHAUSTIVE_MAX_N;
    let acc: SampleScan = if exhaustive {
        scan(&cube, |acc, bits| {
            check(acc, bits, bits, &mut (0..subs.len()))
        })
    } else {
        sample_scan(opts.samples, opts.seed, |acc, i, rng| {
            let k = rng.gen_range(0..subs.len());
            let bits = meet_low_half(&cube, random_bits(&cube, rng) | subs[k].1, rng);
            check(acc, i, bits, &mut std::iter::once(k))
        })
    };

    let mode = if exhaustive {
        Mode::Exhaustive
    } else {
        Mode::Sampled
    };
    let mut cert = Certificate::new(
        ClaimId::LemmaFancy,
        params(n, DegreeMode::AtLeast, false),
        mode,
    );
    if exhaustive {
        cert.subsets_examined = cube.subset_count().expect("n <= 4") - 1;
    } else {
        cert.subsets_examined = opts.samples;
        cert.samples = Some(opts.samples);
        cert.seed = Some(opts.seed);
        cert.notes.push("sampled: evidence, not proof".into());
    }
    cert.counts
        .insert("qualifying_subsets".into(), acc.qualifying);
    cert.counts.insert("pairs_checked".into(), acc.pairs);
    if let Some((_, bits, k)) = acc.bad {
        let (sc, members) = &subs[k];
        let low = low_half_degree(&cube, bits).expect("qualifying");
        let fixed = sc.fixed_mask().count_ones();
        let bound = Dyadic::pow2(low as i32) - Dyadic::pow2(low as i32 - fixed as i32);
        refute(&mut cert, n, bits);
        cert.counterexample_detail = Some(sc.render());
        cert.notes.push(format!(
            "G_l = {} (l = {}), d' = {low}, |S \\ G_l| = {} < {bound}",
            sc.render(),
            n - fixed,
            bits.count_ones() - members.count_ones(),
        ));
    }
    Ok(cert)
}

fn main_claim(n: u32, opts: &VerifyOptions) -> Result<Certificate> {
    at_least_one(n)?;
    large_allowed(n, opts)?;
    let strategy = opts.strategy.unwrap_or(if n <= EXHAUSTIVE_MAX_N {
        Strategy::Exhaustive
    } else {
        Strategy::CanonicalBnb
    });
    let mode = match strategy {
        Strategy::Exhaustive => Mode::Exhaustive,
        Strategy::CanonicalBnb => Mode::CanonicalBnb,
    };
    let dim = CubeDim::new(n)?;
    let previous: BTreeMap<u32, DegreeRow> = opts
        .resume
        .iter()
        .filter(|c| c.claim_id == ClaimId::Main && c.params.n == n)
        .flat_map(|c| c.per_d.iter())
        .filter(|r| matches!(r.status, RowStatus::Confirmed | RowStatus::Infeasible))
        .map(|r| (r.d, r.clone()))
        .collect();

    let mut cert = Certificate::new(ClaimId::Main, params(n, DegreeMode::Exact, true), mode);
    let mut resumed = 0;
    for d in 0..=n {
        let expected = min_irreducible_size(n, d).ok();
        if let Some(row) = previous.get(&d) {
            if row.expected == expected {
                resumed += 1;
                cert.per_d.push(row.clone());
                continue;
            }
        }
        let cfg = SearchConfig::new(dim, d)
            .irreducible(true)
            .strategy(strategy)
            .budget(opts.budget);
        let outcome = min_size_search(&cfg)?;
        let examined = outcome.examined();
        let row = match outcome {
            SearchOutcome::Found { size, witness, .. } => {
                let status = if expected == Some(size) {
                    RowStatus::Confirmed
                } else {
                    RowStatus::Mismatch
                };
                if expected.is_none_or(|e| size < e) {
                    cert.verdict = Verdict::Refuted;
                    cert.counterexample
                        .get_or_insert_with(|| witness.to_lines());
                }
                DegreeRow {
                    d,
                    expected,
                    found: Some(size),
                    status,
                    witness: Some(witness.to_lines()),
                    examined,
                    lower_bound: None,
                }
            }
            SearchOutcome::Infeasible { .. } => DegreeRow {
                d,
                expected,
                found: None,
                status: if expected.is_none() {
                    RowStatus::Infeasible
                } else {
                    RowStatus::Mismatch
                },
                witness: None,
                examined,
                lower_bound: None,
            },
            SearchOutcome::BudgetExceeded { lower_bound, .. } => DegreeRow {
                d,
                expected,
                found: None,
                status: RowStatus::BudgetExceeded,
                witness: None,
                examined,
                lower_bound: Some(lower_bound),
            },
        };
        if row.status == RowStatus::Mismatch && cert.verdict != Verdict::Refuted {
            cert.verdict = Verdict::Refuted;
            cert.notes
                .push(format!("d = {d}: no set attains the formula value"));
        }
        cert.per_d.push(row);
    }
    for row in &cert.per_d {
        if let Some(w) = &row.witness {
            cert.witnesses.push(w.clone());
        }
    }
    cert.subsets_examined = cert.per_d.iter().map(|r| r.examined).sum();
    if cert.verdict != Verdict::Refuted
        && cert
            .per_d
            .iter()
            .any(|r| r.status == RowStatus::BudgetExceeded)
    {
        cert.verdict = Verdict::Partial;
    }
    if resumed > 0 {
        cert.counts.insert("resumed_rows".into(), resumed);
    }
    Ok(cert)
}

/// Re-checks a certificate's counterexample with the general-purpose set
/// operations only. `Ok(true)` means the set really violates the claim.
pub fn recheck_counterexample(cert: &Certificate) -> Result<bool> {
    let Some(parsed) = cert.counterexample_set() else {
        return Ok(false);
    };
    let s = parsed?;
    if s.is_empty() {
        return Ok(false);
    }
    let n = s.dim().n();
    let size = s.len();
    let delta = s.min_degree()?;
    let subcube_dim = s.as_subcube().map(|c| c.dimension());
    let low_half_degree = || -> Result<Option<u32>> {
        let g0 = Subcube::fixing(s.dim(), &[(1, false)])?.vertices();
        let meet = s.intersection(&g0)?;
        let degrees = meet
            .iter()
            .map(|v| s.degree(v))
            .collect::<Result<Vec<u32>>>()?;
        Ok(degrees.into_iter().min())
    };
    Ok(match cert.claim_id {
        ClaimId::Simon => size < 1 << delta || (size == 1 << delta) != (subcube_dim == Some(delta)),
        ClaimId::Gap => gap_violation(size, delta, subcube_dim),
        ClaimId::LemmaMinsize => {
            let rhs: Vec<Option<u64>> = (0..=n).map(|d| minsize_rhs(n, d)).collect();
            !minsize_holds(n, size, delta, &rhs)
        }
        ClaimId::LemmaExtended => low_half_degree()?.is_some_and(|low| size < 1 << low),
        ClaimId::LemmaFancy => {
            let Some(sc) = cert
                .counterexample_detail
                .as_deref()
                .and_then(|p| Subcube::parse_pattern(s.dim(), p))
            else {
                return Ok(false);
            };
            let members = sc.vertices();
            let inside_high_half = sc.fixed_mask() & sc.fixed_values() & 1 == 1;
            match low_half_degree()? {
                Some(low) if inside_high_half && members.difference(&s)?.is_empty() => {
                    let outside = s.difference(&members)?.len();
                    !fancy_holds(outside, low, sc.fixed_mask().count_ones())
                }
                _ => false,
            }
        }
        ClaimId::Main => {
            s.is_irreducible() && min_irreducible_size(n, delta).map_or(true, |e| size < e)
        }
        ClaimId::Search => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn simon_small_cases() {
        let c = verify_simon(3, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        assert_eq!(c.subsets_examined, 255);
        assert_eq!(c.counts["equality_cases"], 27);
        assert_eq!(c.counts["subcubes"], 27);
        let c = verify_simon(1, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        assert_eq!(c.subsets_examined, 3);
        assert!(verify_simon(5, &opts()).is_err());
    }

    #[test]
    fn faulty_kernel_is_caught() {
        fn off_by_one(cube: &SmallCube, bits: u64) -> Option<u32> {
            cube.min_degree(bits).map(|d| d + 1)
        }
        let k = Kernels {
            min_degree: off_by_one,
        };
        let c = verify_with_kernels(Claim::Simon, 3, &opts(), &k).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(c.counterexample.is_some());
        // the reference kernels see through the spurious refutation
        assert!(!recheck_counterexample(&c).unwrap());
        let c = verify_with_kernels(Claim::Gap, 3, &opts(), &k).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
    }

    #[test]
    fn main_small_cases() {
        let c = verify_main(2, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        let found: Vec<_> = c.per_d.iter().map(|r| r.found).collect();
        assert_eq!(found, [Some(2), Some(3), Some(4)]);
        let c = verify_main(1, &opts()).unwrap();
        assert_eq!(c.per_d[0].status, RowStatus::Infeasible);
        assert_eq!(c.verdict, Verdict::Verified);
    }

    #[test]
    fn gap_histogram_at_n3() {
        let c = verify_gap(3, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        let d1 = c.histogram.iter().find(|h| h.degree == 1).unwrap();
        assert_eq!(d1.sizes[0].size, 2);
        assert!(d1.sizes.iter().all(|s| s.size == 2 || s.size >= 3));
    }

    #[test]
    fn minsize_rhs_matches_threshold() {
        for n in 2..=10 {
            for d in 1..n {
                assert_eq!(minsize_rhs(n, d), Some(3 << (d - 1)));
            }
            assert_eq!(minsize_rhs(n, 0), Some(2));
        }
        assert_eq!(minsize_rhs(1, 0), None);
    }

    #[test]
    fn fancy_is_refuted_by_an_edge_across_the_halves() {
        let c = verify_lemma_fancy(2, &opts()).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(recheck_counterexample(&c).unwrap());
        let s = c.counterexample_set().unwrap().unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn fancy_base_case_bound() {
        // one fixed coordinate: |S ∩ G_0| >= 2^{d'-1}
        assert!(fancy_holds(2, 2, 1));
        assert!(!fancy_holds(1, 2, 1));
        // degree zero in G_0: one vertex outside always suffices
        for fixed in 1..=6 {
            assert!(fancy_holds(1, 0, fixed));
        }
    }

    #[test]
    fn sampling_is_thread_independent() {
        let base = VerifyOptions {
            samples: 20_000,
            ..opts()
        };
        let one = verify_lemma_fancy(
            4,
            &VerifyOptions {
                threads: 1,
                ..base.clone()
            },
        )
        .unwrap();
        let many = verify_lemma_fancy(4, &VerifyOptions { threads: 4, ..base }).unwrap();
        assert_eq!(one.counts, many.counts);
        assert_eq!(one.counterexample, many.counterexample);
    }
}
