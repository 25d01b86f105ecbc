//! Sensitivity measures of Boolean functions and the bridge from a function
//! `f` to its one-set `V(f) = {x : f(x) = 1}`.

use serde::{Serialize, Serializer};

use crate::cube::{bits_to_set, parse_bitmap, parse_header, CubeDim, Vertex, VertexSet};
use crate::dyadic::Dyadic;
use crate::error::{CubeError, ParseError, Result};

/// A Boolean function of `n` variables, stored as its one-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    ones: VertexSet,
}

impl TruthTable {
    pub fn from_one_set(ones: VertexSet) -> Self {
        TruthTable { ones }
    }

    pub fn from_fn(dim: CubeDim, f: impl Fn(Vertex) -> bool) -> Self {
        let indices = (0..dim.vertex_count()).filter(|&i| f(dim.vertex(i).expect("in range")));
        TruthTable {
            ones: VertexSet::from_indices(dim, indices).expect("in range"),
        }
    }

    pub fn or(dim: CubeDim) -> Self {
        Self::from_fn(dim, |x| x.index() != 0)
    }

    pub fn and(dim: CubeDim) -> Self {
        let all = dim.coord_mask();
        Self::from_fn(dim, move |x| x.index() == all)
    }

    pub fn parity(dim: CubeDim) -> Self {
        Self::from_fn(dim, |x| x.index().count_ones() % 2 == 1)
    }

    pub fn constant(dim: CubeDim, value: bool) -> Self {
        Self::from_fn(dim, move |_| value)
    }

    /// Built-in functions: `or:<n>`, `and:<n>`, `parity:<n>`, `const0:<n>`, `const1:<n>`.
    pub fn from_catalog(name: &str) -> Result<Self> {
        let bad = |msg: String| CubeError::Parse(ParseError::new(1, 1, msg));
        let (kind, n) = name
            .split_once(':')
            .ok_or_else(|| bad(format!("catalog name {name:?} must look like `or:3`")))?;
        let n: u32 = n
            .parse()
            .map_err(|_| bad(format!("invalid dimension in {name:?}")))?;
        let dim = CubeDim::new(n)?;
        match kind {
            "or" => Ok(Self::or(dim)),
            "and" => Ok(Self::and(dim)),
            "parity" => Ok(Self::parity(dim)),
            "const0" => Ok(Self::constant(dim, false)),
            "const1" => Ok(Self::constant(dim, true)),
            _ => Err(bad(format!("unknown catalog function {kind:?}"))),
        }
    }

    /// Parses `n=<dim>` followed by one `2^n`-character output line.
    pub fn parse_text(text: &str) -> std::result::Result<Self, ParseError> {
        let mut lines = text.lines().enumerate();
        let dim = parse_header(&mut lines)?;
        let (idx, line) = lines
            .find(|(_, l)| !l.trim_end().is_empty())
            .ok_or_else(|| ParseError::new(2, 1, "missing truth-table line"))?;
        let bits = parse_bitmap(idx + 1, line.trim_end(), dim.vertex_count() as usize)?;
        if let Some((extra, _)) = lines.find(|(_, l)| !l.trim_end().is_empty()) {
            return Err(ParseError::new(
                extra + 1,
                1,
                "unexpected content after truth table",
            ));
        }
        Ok(TruthTable {
            ones: bits_to_set(dim, &bits),
        })
    }

    pub fn to_text(&self) -> String {
        format!("n={}\n{}\n", self.dim().n(), self.ones.to_bitmap_string())
    }

    pub fn dim(&self) -> CubeDim {
        self.ones.dim()
    }

    pub fn eval(&self, x: Vertex) -> bool {
        self.ones.contains(x)
    }

    pub fn negate(&self) -> Self {
        TruthTable {
            ones: self.ones.complement(),
        }
    }

    /// `V(f)`.
    pub fn one_set(&self) -> VertexSet {
        self.ones.clone()
    }

    /// `s(f, x)`: how many single-coordinate flips change the output at `x`.
    pub fn local_sensitivity(&self, x: Vertex) -> u32 {
        let dim = self.dim();
        let fx = self.eval(x);
        (1..=dim.n() as usize)
            .filter(|&i| self.eval(x.flip(dim, i).expect("valid vertex")) != fx)
            .count() as u32
    }

    /// `s_c(f)`; absent when no input evaluates to `c`.
    ///
    /// On the level set `{f = c}` local sensitivity is `n` minus the in-set
    /// degree, so this is `n - δ` of that level set.
    pub fn c_sensitivity(&self, c: bool) -> Option<u32> {
        let level = if c {
            self.ones.clone()
        } else {
            self.ones.complement()
        };
        level.sensitivity().ok()
    }

    /// `s(f)`.
    pub fn sensitivity(&self) -> u32 {
        self.c_sensitivity(false)
            .into_iter()
            .chain(self.c_sensitivity(true))
            .max()
            .unwrap_or(0)
    }

    pub fn report(&self) -> MeasureReport {
        let s0 = self.c_sensitivity(false);
        let s1 = self.c_sensitivity(true);
        MeasureReport {
            s: s0.into_iter().chain(s1).max().unwrap_or(0),
            s0,
            s1,
            ones_count: self.ones.len(),
            delta_of_one_set: self.ones.min_degree().ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub s: u32,
    pub s0: Option<u32>,
    pub s1: Option<u32>,
    pub ones_count: u64,
    pub delta_of_one_set: Option<u32>,
}

/// `|V(f)| >= 2^{n - s_1(f)}`, with equality exactly when `V(f)` is a subcube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimonCorollary {
    pub s1: u32,
    pub bound: u64,
    pub actual: u64,
    pub holds: bool,
    pub equality: bool,
    pub is_subcube: bool,
}

impl SimonCorollary {
    /// The bound holds and equality coincides with subcube-ness.
    pub fn passes(&self) -> bool {
        self.holds && self.equality == self.is_subcube
    }
}

pub fn check_simon_corollary(f: &TruthTable) -> Result<SimonCorollary> {
    let ones = f.one_set();
    let s1 = f.c_sensitivity(true).ok_or(CubeError::ConstantZero)?;
    let n = f.dim().n();
    let bound = 1u64 << (n - s1);
    let actual = ones.len();
    Ok(SimonCorollary {
        s1,
        bound,
        actual,
        holds: actual >= bound,
        equality: actual == bound,
        is_subcube: ones.as_subcube().is_some(),
    })
}

/// Outcome of the lower bound for irreducible one-sets,
/// `|V(f)| >= 2^{n - s_1 + 1} - 2^{n - 2 s_1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IrreducibleCorollary {
    /// Some half-cube `x_i = j` holds no one-input.
    ConditionNotMet,
    Checked {
        s1: u32,
        bound: Dyadic,
        actual: u64,
        holds: bool,
    },
}

impl IrreducibleCorollary {
    pub fn passes(&self) -> bool {
        match self {
            IrreducibleCorollary::ConditionNotMet => true,
            IrreducibleCorollary::Checked { holds, .. } => *holds,
        }
    }
}

pub fn check_irreducible_corollary(f: &TruthTable) -> IrreducibleCorollary {
    let ones = f.one_set();
    if !ones.is_irreducible() {
        return IrreducibleCorollary::ConditionNotMet;
    }
    let n = f.dim().n();
    let s1 = f
        .c_sensitivity(true)
        .expect("irreducible sets are nonempty");
    let actual = ones.len();
    // 2^{2 s1} |V| >= 2^{n + s1 + 1} - 2^n, all in integers
    let scaled_actual = u128::from(actual) << (2 * s1);
    let scaled_bound = (1u128 << (n + s1 + 1)) - (1u128 << n);
    let n = n as i32;
    let s = s1 as i32;
    let bound = Dyadic::pow2(n - s + 1) - Dyadic::pow2(n - 2 * s);
    IrreducibleCorollary::Checked {
        s1,
        bound,
        actual,
        holds: scaled_actual >= scaled_bound,
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
