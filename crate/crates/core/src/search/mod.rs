//! Minimum-size search over subsets of `Q_n`, by plain enumeration or by
//! symmetry-pruned branch and bound.

mod automorphism;
mod bnb;
pub mod small;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use automorphism::{apply_automorphism, canonical_form, Automorphism};
use small::{SmallCube, SMALL_MAX_N};

use crate::cube::{CubeDim, VertexSet};
use crate::error::{CubeError, Result};

/// Largest `n` for which all `2^{2^n}` subsets are enumerated.
pub const EXHAUSTIVE_MAX_N: u32 = 4;

/// Largest `n` handled by the branch and bound (one machine word per set).
pub const BNB_MAX_N: u32 = SMALL_MAX_N;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMode {
    /// `δ(G) = d`.
    #[default]
    Exact,
    /// `δ(G) >= d`.
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Exhaustive,
    CanonicalBnb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: CubeDim,
    pub d: u32,
    pub degree_mode: DegreeMode,
    pub require_irreducible: bool,
    /// Cap on subsets (exhaustive) or search nodes (branch and bound).
    pub size_budget: Option<u64>,
    pub strategy: Strategy,
    /// Worker threads; 0 uses the global pool. Never affects results.
    pub threads: usize,
}

impl SearchConfig {
    pub fn new(n: CubeDim, d: u32) -> Self {
        SearchConfig {
            n,
            d,
            degree_mode: DegreeMode::Exact,
            require_irreducible: false,
            size_budget: None,
            strategy: Strategy::Exhaustive,
            threads: 0,
        }
    }

    pub fn irreducible(mut self, yes: bool) -> Self {
        self.require_irreducible = yes;
        self
    }

    pub fn mode(mut self, mode: DegreeMode) -> Self {
        self.degree_mode = mode;
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.size_budget = budget;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.n.n();
        if self.d > n {
            return Err(CubeError::DegreeOutOfRange { d: self.d, n });
        }
        let (cap, what) = match self.strategy {
            Strategy::Exhaustive => (EXHAUSTIVE_MAX_N, "exhaustive enumeration"),
            Strategy::CanonicalBnb => (BNB_MAX_N, "canonical branch and bound"),
        };
        if n > cap {
            return Err(CubeError::CapExceeded { n, cap, what });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        size: u64,
        /// Smallest canonical form among all minimum-size solutions.
        witness: VertexSet,
        examined: u64,
    },
    Infeasible {
        examined: u64,
    },
    /// Not a verdict: no set smaller than `lower_bound` exists, nothing more
    /// is known.
    BudgetExceeded {
        examined: u64,
        lower_bound: u64,
    },
}

impl SearchOutcome {
    pub fn examined(&self) -> u64 {
        match *self {
            SearchOutcome::Found { examined, .. }
            | SearchOutcome::Infeasible { examined }
            | SearchOutcome::BudgetExceeded { examined, .. } => examined,
        }
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            SearchOutcome::Found { size, .. } => Some(*size),
            _ => None,
        }
    }
}

/// Runs `f` on a pool with `threads` workers (0: the global pool).
pub(crate) fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// The least `|S|` over nonempty `S` meeting the degree and irreducibility
/// constraints, with a witness.
pub fn min_size_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let cube = SmallCube::new(cfg.n.n());
    with_threads(cfg.threads, || match cfg.strategy {
        Strategy::Exhaustive => Ok(exhaustive(&cube, cfg)),
        Strategy::CanonicalBnb => Ok(branch_and_bound(&cube, cfg)),
    })
}

fn degree_ok(mode: DegreeMode, delta: u32, d: u32) -> bool {
    match mode {
        DegreeMode::Exact => delta == d,
        DegreeMode::AtLeast => delta >= d,
    }
}

fn exhaustive(cube: &SmallCube, cfg: &SearchConfig) -> SearchOutcome {
    let total = cube.subset_count().expect("n <= 4");
    let examined = total - 1;
    if cfg.size_budget.is_some_and(|b| examined > b) {
        return SearchOutcome::BudgetExceeded {
            examined: 0,
            lower_bound: 1,
        };
    }
    let best = (1..total)
        .into_par_iter()
        .filter(|&bits| {
            cube.min_degree(bits)
                .is_some_and(|delta| degree_ok(cfg.degree_mode, delta, cfg.d))
                && (!cfg.require_irreducible || cube.is_irreducible(bits))
        })
        .map(|bits| (bits.count_ones(), bits))
        .min();
    match best {
        // the numerically smallest minimum-size solution is its own canonical form
        Some((size, bits)) => SearchOutcome::Found {
            size: size.into(),
            witness: VertexSet::from_u64(cfg.n, bits),
            examined,
        },
        None => SearchOutcome::Infeasible { examined },
    }
}

fn branch_and_bound(cube: &SmallCube, cfg: &SearchConfig) -> SearchOutcome {
    let degrees: Vec<u32> = match cfg.degree_mode {
        DegreeMode::Exact => vec![cfg.d],
        DegreeMode::AtLeast => (cfg.d..=cfg.n.n()).collect(),
    };
    match bnb::min_size(cube, &degrees, cfg.require_irreducible, cfg.size_budget) {
        bnb::BnbResult::Found {
            size,
            canonical,
            nodes,
        } => SearchOutcome::Found {
            size: size.into(),
            witness: VertexSet::from_u64(cfg.n, canonical),
            examined: nodes,
        },
        bnb::BnbResult::Infeasible { nodes } => SearchOutcome::Infeasible { examined: nodes },
        bnb::BnbResult::BudgetExceeded { nodes, lower_bound } => SearchOutcome::BudgetExceeded {
            examined: nodes,
            lower_bound: lower_bound.into(),
        },
    }
}
