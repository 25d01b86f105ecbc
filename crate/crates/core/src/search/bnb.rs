//! Symmetry-pruned branch and bound for the smallest set with a prescribed
//! minimum degree, optionally irreducible. Works on single-word sets
//! (`n <= 6`).
//!
//! Every nonempty set has an image under `Aut(Q_n)` in which vertex `0` has
//! the minimum degree `j` and its in-set neighbours are exactly
//! `e_1, ..., e_j`. The search only explores sets normalized this way: the
//! root holds `0` and `e_1..e_j`, excludes `e_{j+1}..e_n`, and requires
//! degree `>= j` everywhere else. The degree is then exactly `j`.
//!
//! Nodes carry an include set and an exclude set. A node branches on the
//! undecided neighbours of the member with the largest degree deficit
//! (fewest options first), or, once every member has enough neighbours, on
//! the undecided vertices of the first half-cube the set still misses. Child
//! `t` includes candidate `t` and excludes candidates `1..t`, so subtrees are
//! disjoint. Sizes are tried in increasing order; at each size the whole
//! tree is explored and the smallest canonical form among solutions is kept.

use rayon::prelude::*;

use super::small::SmallCube;

/// Frontier size handed to workers. Fixed so node counts do not depend on
/// the worker count.
const FRONTIER_TARGET: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BnbResult {
    Found {
        size: u32,
        canonical: u64,
        nodes: u64,
    },
    Infeasible {
        nodes: u64,
    },
    BudgetExceeded {
        nodes: u64,
        lower_bound: u32,
    },
}

#[derive(Debug, Clone, Copy)]
struct Node {
    inside: u64,
    outside: u64,
}

enum Expansion {
    Dead {
        bound_cut: bool,
    },
    Solution(u64),
    Branch {
        base: Node,
        candidates: u64,
        take: u32,
    },
}

impl Expansion {
    fn children(base: Node, candidates: u64, take: u32) -> impl Iterator<Item = Node> {
        let mut rest = candidates;
        let mut excluded = 0u64;
        (0..take).map_while(move |_| {
            if rest == 0 {
                return None;
            }
            let u = rest & rest.wrapping_neg();
            rest ^= u;
            let child = Node {
                inside: base.inside | u,
                outside: base.outside | excluded,
            };
            excluded |= u;
            Some(child)
        })
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    nodes: u64,
    bound_cut: bool,
    aborted: bool,
    best: Option<(u32, u64)>,
}

impl Tally {
    fn record(&mut self, cube: &SmallCube, bits: u64) {
        let cand = (bits.count_ones(), cube.canonical(bits));
        if self.best.is_none_or(|b| cand < b) {
            self.best = Some(cand);
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.nodes += other.nodes;
        self.bound_cut |= other.bound_cut;
        self.aborted |= other.aborted;
        if let Some(b) = other.best {
            if self.best.is_none_or(|a| b < a) {
                self.best = Some(b);
            }
        }
    }
}

struct Level<'a> {
    cube: &'a SmallCube,
    irreducible: bool,
    /// Size bound for this pass.
    k: u32,
}

impl Level<'_> {
    fn root(&self, j: u32) -> Node {
        let n = self.cube.n();
        let mut inside = 1u64;
        let mut outside = 0u64;
        for c in 0..n {
            if c < j {
                inside |= 1 << (1u32 << c);
            } else {
                outside |= 1 << (1u32 << c);
            }
        }
        Node { inside, outside }
    }

    fn expand(&self, j: u32, node: Node) -> Expansion {
        let cube = self.cube;
        let free = cube.full() & !node.inside & !node.outside;
        let potential = cube.count_planes(node.inside | free);
        if SmallCube::below(&potential, j) & node.inside != 0 {
            return Expansion::Dead { bound_cut: false };
        }
        let planes = cube.count_planes(node.inside);
        let low = cube
            .min_count(&planes, node.inside)
            .expect("nodes are nonempty");
        let deficit = j.saturating_sub(low);
        let size = node.inside.count_ones();
        let missing = if self.irreducible {
            cube.missing_half(node.inside)
        } else {
            None
        };
        let lower_bound = size + deficit + u32::from(deficit == 0 && missing.is_some());
        if lower_bound > self.k {
            return Expansion::Dead { bound_cut: true };
        }
        if deficit > 0 {
            let mut pick = (u32::MAX, 0u64);
            let mut rest = SmallCube::equal(&planes, low) & node.inside;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let options = self.neighbor_mask(v) & free;
                if options.count_ones() < pick.0 {
                    pick = (options.count_ones(), options);
                }
            }
            let (count, candidates) = pick;
            return Expansion::Branch {
                base: node,
                candidates,
                take: count + 1 - deficit,
            };
        }
        match missing {
            None => Expansion::Solution(node.inside),
            Some((c, value)) => {
                let candidates = free & cube.half(c, value);
                if candidates == 0 {
                    return Expansion::Dead { bound_cut: false };
                }
                Expansion::Branch {
                    base: node,
                    candidates,
                    take: candidates.count_ones(),
                }
            }
        }
    }

    fn neighbor_mask(&self, v: u32) -> u64 {
        (0..self.cube.n()).fold(0, |acc, c| acc | 1 << (v ^ (1 << c)))
    }

    fn dfs(&self, j: u32, node: Node, budget: u64, tally: &mut Tally) {
        if tally.aborted {
            return;
        }
        tally.nodes += 1;
        if tally.nodes > budget {
            tally.aborted = true;
            return;
        }
        match self.expand(j, node) {
            Expansion::Dead { bound_cut } => tally.bound_cut |= bound_cut,
            Expansion::Solution(bits) => tally.record(self.cube, bits),
            Expansion::Branch {
                base,
                candidates,
                take,
            } => {
                for child in Expansion::children(base, candidates, take) {
                    self.dfs(j, child, budget, tally);
                }
            }
        }
    }

    /// Breadth-first expansion until enough independent subtrees exist.
    fn frontier(&self, js: &[u32], budget: u64, tally: &mut Tally) -> Vec<(u32, Node)> {
        let mut queue: std::collections::VecDeque<(u32, Node)> =
            js.iter().map(|&j| (j, self.root(j))).collect();
        while let Some(&(j, node)) = queue.front() {
            if queue.len() >= FRONTIER_TARGET || tally.aborted {
                break;
            }
            queue.pop_front();
            tally.nodes += 1;
            if tally.nodes > budget {
                tally.aborted = true;
                break;
            }
            match self.expand(j, node) {
                Expansion::Dead { bound_cut } => tally.bound_cut |= bound_cut,
                Expansion::Solution(bits) => tally.record(self.cube, bits),
                Expansion::Branch {
                    base,
                    candidates,
                    take,
                } => queue.extend(Expansion::children(base, candidates, take).map(|c| (j, c))),
            }
        }
        queue.into_iter().collect()
    }
}

/// Smallest size of a set whose minimum degree lies in `degrees` (and which
/// is irreducible when asked), with the smallest canonical witness.
///
/// `budget` caps the number of search nodes. Per size pass, every frontier
/// subtree gets the budget left at the start of the pass, so the outcome is
/// the same for every worker count.
pub(crate) fn min_size(
    cube: &SmallCube,
    degrees: &[u32],
    irreducible: bool,
    budget: Option<u64>,
) -> BnbResult {
    let n = cube.n();
    let budget = budget.unwrap_or(u64::MAX);
    let min_j = degrees.iter().copied().min().unwrap_or(0);
    let mut start = min_j + 1;
    if irreducible && n >= 1 {
        start = start.max(2);
    }
    let mut nodes = 0u64;
    for k in start..=(1u32 << n) {
        let level = Level {
            cube,
            irreducible,
            k,
        };
        let remaining = budget.saturating_sub(nodes);
        let mut tally = Tally::default();
        let frontier = level.frontier(degrees, remaining, &mut tally);
        if !tally.aborted {
            let task_budget = remaining.saturating_sub(tally.nodes);
            let parts: Vec<Tally> = frontier
                .par_iter()
                .map(|&(j, node)| {
                    let mut t = Tally::default();
                    level.dfs(j, node, task_budget, &mut t);
                    t
                })
                .collect();
            for part in &parts {
                tally.merge(part);
            }
        }
        nodes = nodes.saturating_add(tally.nodes);
        if tally.aborted {
            return BnbResult::BudgetExceeded {
                nodes,
                lower_bound: k,
            };
        }
        if let Some((size, canonical)) = tally.best {
            return BnbResult::Found {
                size,
                canonical,
                nodes,
            };
        }
        if !tally.bound_cut {
            // the size bound never bit, so larger bounds explore the same tree
            return BnbResult::Infeasible { nodes };
        }
    }
    BnbResult::Infeasible { nodes }
}
