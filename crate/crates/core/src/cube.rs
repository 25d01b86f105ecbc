//! Vertex sets of the Boolean cube `Q_n` and the exact kernels on the graphs
//! they induce.
//!
//! Bit convention: coordinate `x_1` is the least significant bit of a vertex
//! index, and a vertex renders as the string `x_1 x_2 ... x_n` read left to
//! right. So `G_0 = {x : x_1 = 0}` is the set of even indices, and the vertex
//! with index 1 in `Q_3` renders as `100`.
//!
//! A [`VertexSet`] is a dense membership bitmap over all `2^n` vertices. Edges
//! are never stored: the induced graph is implied by the vertex set. Degree
//! queries run bit-parallel, 64 vertices per word, using bit-sliced counters.

use std::fmt;

use crate::error::{CubeError, ParseError, Result};

/// Largest dimension with an explicit bitmap (`2^25` bits, 4 MiB per set).
pub const MAX_N: u32 = 25;

/// Masks of in-word positions whose bit `c` is zero, for `c < 6`.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Bit planes for per-vertex neighbour counts (counts stay below 32).
const PLANES: usize = 5;

/// The ambient dimension `n` of `Q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeDim(u32);

impl CubeDim {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_N {
            return Err(CubeError::DimensionOutOfRange { n, max: MAX_N });
        }
        Ok(CubeDim(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// `2^n`.
    pub fn vertex_count(self) -> u64 {
        1u64 << self.0
    }

    /// Mask with one bit per coordinate.
    pub fn coord_mask(self) -> u32 {
        ((1u64 << self.0) - 1) as u32
    }

    pub(crate) fn word_count(self) -> usize {
        self.vertex_count().div_ceil(64) as usize
    }

    /// Mask of valid bits in the last (or only) bitmap word.
    fn tail_mask(self) -> u64 {
        if self.0 >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << self.0)) - 1
        }
    }

    pub fn vertex(self, index: u64) -> Result<Vertex> {
        if index >= self.vertex_count() {
            return Err(CubeError::VertexOutOfRange { index, n: self.0 });
        }
        Ok(Vertex(index as u32))
    }

    /// Validates a 1-based coordinate and returns its 0-based bit position.
    pub fn check_coord(self, coord: usize) -> Result<u32> {
        if coord == 0 || coord > self.0 as usize {
            return Err(CubeError::CoordinateOutOfRange { coord, n: self.0 });
        }
        Ok(coord as u32 - 1)
    }

    fn check_same(self, other: CubeDim) -> Result<()> {
        if self != other {
            return Err(CubeError::DimensionMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

impl fmt::Display for CubeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}", self.0)
    }
}

/// A vertex of `Q_n`, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(u32);

impl Vertex {
    pub fn index(self) -> u32 {
        self.0
    }

    /// Value of coordinate `x_coord` (1-based). Caller validates the range.
    pub fn bit(self, coord: usize) -> bool {
        (self.0 >> (coord - 1)) & 1 == 1
    }

    /// `x^{(i)}`: the vertex differing from `self` exactly in coordinate `coord`.
    pub fn flip(self, dim: CubeDim, coord: usize) -> Result<Vertex> {
        if u64::from(self.0) >= dim.vertex_count() {
            return Err(CubeError::VertexOutOfRange {
                index: self.0.into(),
                n: dim.n(),
            });
        }
        let bit = dim.check_coord(coord)?;
        Ok(Vertex(self.0 ^ (1 << bit)))
    }

    /// Renders `x_1 ... x_n`.
    pub fn render(self, dim: CubeDim) -> String {
        (0..dim.n())
            .map(|b| if (self.0 >> b) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parses an `n`-character binary string `x_1 ... x_n`.
    pub fn parse(dim: CubeDim, text: &str) -> Option<Vertex> {
        if text.len() != dim.n() as usize {
            return None;
        }
        let mut index = 0u32;
        for (b, ch) in text.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => index |= 1 << b,
                _ => return None,
            }
        }
        Some(Vertex(index))
    }
}

/// Set operation selector for [`VertexSet::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

/// A subset of the vertices of `Q_n`, stored as a dense bitmap.
///
/// Two sets are equal only if their dimensions and bitmaps agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dim: CubeDim,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(dim: CubeDim) -> Self {
        VertexSet {
            dim,
            words: vec![0; dim.word_count()],
        }
    }

    /// All of `Q_n`.
    pub fn full(dim: CubeDim) -> Self {
        let mut words = vec![u64::MAX; dim.word_count()];
        if let Some(last) = words.last_mut() {
            *last = dim.tail_mask();
        }
        VertexSet { dim, words }
    }

    pub fn from_indices<I>(dim: CubeDim, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let mut set = VertexSet::empty(dim);
        for index in indices {
            let v = dim.vertex(index)?;
            set.insert(v);
        }
        Ok(set)
    }

    /// Builds a set from rendered vertex strings such as `"101"`.
    pub fn from_strings<'a, I>(dim: CubeDim, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = VertexSet::empty(dim);
        for (k, text) in vertices.into_iter().enumerate() {
            let v = Vertex::parse(dim, text).ok_or_else(|| {
                ParseError::new(k + 1, 1, format!("not a vertex of {dim}: {text:?}"))
            })?;
            set.insert(v);
        }
        Ok(set)
    }

    /// Set from the low `2^n` bits of `bits`; requires `n <= 6`.
    pub(crate) fn from_u64(dim: CubeDim, bits: u64) -> Self {
        debug_assert!(dim.n() <= 6);
        VertexSet {
            dim,
            words: vec![bits & dim.tail_mask()],
        }
    }

    /// The bitmap as a single word; requires `n <= 6`.
    pub(crate) fn to_u64(&self) -> u64 {
        debug_assert!(self.dim.n() <= 6);
        self.words[0]
    }

    pub fn dim(&self) -> CubeDim {
        self.dim
    }

    pub(crate) fn insert(&mut self, v: Vertex) {
        let i = v.0 as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let i = v.0 as usize;
        i < self.dim.vertex_count() as usize && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// `|V|`.
    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(Vertex((w * 64) as u32 + b))
            })
        })
    }

    /// Indicator word `w` of vertices whose neighbour across bit `c` is a member.
    fn neighbor_word(&self, w: usize, c: u32) -> u64 {
        if c < 6 {
            let x = self.words[w];
            let s = 1u32 << c;
            ((x >> s) & LOW_HALF[c as usize]) | ((x << s) & !LOW_HALF[c as usize])
        } else {
            self.words[w ^ (1usize << (c - 6))]
        }
    }

    /// Bit-sliced in-set neighbour counts for the 64 vertices of word `w`.
    fn count_planes(&self, w: usize) -> [u64; PLANES] {
        let mut planes = [0u64; PLANES];
        for c in 0..self.dim.n() {
            let mut carry = self.neighbor_word(w, c);
            for plane in planes.iter_mut() {
                if carry == 0 {
                    break;
                }
                let sum = *plane ^ carry;
                carry &= *plane;
                *plane = sum;
            }
        }
        planes
    }

    /// `deg(v, G)`: the number of coordinates whose flip stays inside the set.
    pub fn degree(&self, v: Vertex) -> Result<u32> {
        if !self.contains(v) {
            return Err(CubeError::NotAMember { index: v.0.into() });
        }
        let mut deg = 0;
        for c in 0..self.dim.n() {
            if self.contains(Vertex(v.0 ^ (1 << c))) {
                deg += 1;
            }
        }
        Ok(deg)
    }

    /// `δ(G)`, the minimum degree of the induced subgraph.
    pub fn min_degree(&self) -> Result<u32> {
        let mut best: Option<u32> = None;
        for w in 0..self.words.len() {
            let members = self.words[w];
            if members == 0 {
                continue;
            }
            let planes = self.count_planes(w);
            let limit = best.unwrap_or(self.dim.n() + 1);
            for k in 0..limit {
                if equal_to(&planes, k) & members != 0 {
                    best = Some(k);
                    break;
                }
            }
            if best == Some(0) {
                break;
            }
        }
        best.ok_or(CubeError::EmptySet)
    }

    /// Sensitivity of the set: `n - δ(G)`.
    pub fn sensitivity(&self) -> Result<u32> {
        Ok(self.dim.n() - self.min_degree()?)
    }

    /// True iff the set meets both halves `x_i = 0` and `x_i = 1` for every `i`.
    pub fn is_irreducible(&self) -> bool {
        let (and_all, or_all) = self.agreement();
        match and_all {
            None => false,
            Some(and_all) => and_all == 0 && or_all == self.dim.coord_mask(),
        }
    }

    /// AND and OR over all member indices; `None` for the empty set.
    fn agreement(&self) -> (Option<u32>, u32) {
        let mut and_all = u32::MAX;
        let mut or_all = 0u32;
        let mut any = false;
        for v in self.iter() {
            and_all &= v.0;
            or_all |= v.0;
            any = true;
        }
        (any.then_some(and_all & self.dim.coord_mask()), or_all)
    }

    /// The subcube whose vertex set is exactly this set, if there is one.
    pub fn as_subcube(&self) -> Option<Subcube> {
        let size = self.len();
        if size == 0 || !size.is_power_of_two() {
            return None;
        }
        let m = size.trailing_zeros();
        let (and_all, or_all) = self.agreement();
        let and_all = and_all?;
        let agree = (and_all | !or_all) & self.dim.coord_mask();
        if self.dim.n() - agree.count_ones() != m {
            return None;
        }
        Some(Subcube {
            dim: self.dim,
            fixed_mask: agree,
            fixed_values: and_all & agree,
        })
    }

    /// Members with `x_coord = value`, projected onto the other `n - 1`
    /// coordinates (kept in their original order).
    pub fn half_restrict(&self, coord: usize, value: bool) -> Result<VertexSet> {
        let c = self.dim.check_coord(coord)?;
        let sub = CubeDim(self.dim.n() - 1);
        let low = (1u32 << c) - 1;
        let mut out = VertexSet::empty(sub);
        for v in self.iter() {
            if ((v.0 >> c) & 1 == 1) == value {
                let projected = ((v.0 >> (c + 1)) << c) | (v.0 & low);
                out.insert(Vertex(projected));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, other: &VertexSet, op: SetOp) -> Result<VertexSet> {
        self.dim.check_same(other.dim)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| match op {
                SetOp::Union => a | b,
                SetOp::Intersection => a & b,
                SetOp::Difference => a & !b,
            })
            .collect();
        Ok(VertexSet {
            dim: self.dim,
            words,
        })
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet> {
        self.apply(other, SetOp::Union)
    }

    pub fn intersection(&self, other: &VertexSet) -> Result<VertexSet> {
        self.apply(other, SetOp::Intersection)
    }

    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet> {
        self.apply(other, SetOp::Difference)
    }

    /// `Q_n \ S`.
    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.dim)
            .difference(self)
            .expect("same dimension")
    }

    /// Per-line text form: `n=<dim>` followed by one vertex per line.
    pub fn to_lines(&self) -> Vec<String> {
        std::iter::once(format!("n={}", self.dim.n()))
            .chain(self.iter().map(|v| v.render(self.dim)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in self.to_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// The `2^n`-character membership string indexed by vertex index.
    pub fn to_bitmap_string(&self) -> String {
        (0..self.dim.vertex_count())
            .map(|i| {
                if self.contains(Vertex(i as u32)) {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// Parses either the per-line form or the compact bitmap form.
    pub fn parse_text(text: &str) -> std::result::Result<VertexSet, ParseError> {
        let mut lines = text.lines().enumerate();
        let dim = parse_header(&mut lines)?;
        let body: Vec<(usize, &str)> = lines
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let width = dim.n() as usize;
        let slots = dim.vertex_count() as usize;
        if body.len() == 1 && body[0].1.len() == slots && slots != width {
            let (line_no, line) = body[0];
            let bits = parse_bitmap(line_no, line, slots)?;
            return Ok(bits_to_set(dim, &bits));
        }
        let mut set = VertexSet::empty(dim);
        for (line_no, line) in body {
            if let Some(col) = line.bytes().position(|b| b != b'0' && b != b'1') {
                return Err(ParseError::new(line_no, col + 1, "expected '0' or '1'"));
            }
            if line.len() != width {
                return Err(ParseError::new(
                    line_no,
                    line.len().min(width) + 1,
                    format!("vertex must have {width} characters, found {}", line.len()),
                ));
            }
            set.insert(Vertex::parse(dim, line).expect("validated"));
        }
        Ok(set)
    }
}

/// Mask of the 64 slots whose bit-sliced count equals `k`.
fn equal_to(planes: &[u64; PLANES], k: u32) -> u64 {
    planes.iter().enumerate().fold(
        u64::MAX,
        |eq, (b, &p)| {
            if (k >> b) & 1 == 1 {
                eq & p
            } else {
                eq & !p
            }
        },
    )
}

/// Reads the `n=<dim>` header line.
pub(crate) fn parse_header<'a, I>(lines: &mut I) -> std::result::Result<CubeDim, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "missing header line `n=<dim>`"))?;
    let header = header.trim_end();
    let digits = header
        .strip_prefix("n=")
        .ok_or_else(|| ParseError::new(1, 1, "header must start with `n=`"))?;
    let n: u32 = digits
        .parse()
        .map_err(|_| ParseError::new(1, 3, format!("invalid dimension {digits:?}")))?;
    CubeDim::new(n).map_err(|e| ParseError::new(1, 3, e.to_string()))
}

/// Parses a `2^n`-character 0/1 line.
pub(crate) fn parse_bitmap(
    line_no: usize,
    line: &str,
    slots: usize,
) -> std::result::Result<Vec<bool>, ParseError> {
    if let Some(col) = line.bytes().position(|b| b != b'0' && b != b'1') {
        return Err(ParseError::new(line_no, col + 1, "expected '0' or '1'"));
    }
    if line.len() != slots {
        return Err(ParseError::new(
            line_no,
            line.len().min(slots) + 1,
            format!("expected {slots} characters, found {}", line.len()),
        ));
    }
    Ok(line.bytes().map(|b| b == b'1').collect())
}

pub(crate) fn bits_to_set(dim: CubeDim, bits: &[bool]) -> VertexSet {
    let mut set = VertexSet::empty(dim);
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        set.insert(Vertex(i as u32));
    }
    set
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&v.render(self.dim))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.dim, self)
    }
}

/// An `m`-subcube: all vertices carrying `fixed_values` on the `n - m`
/// positions of `fixed_mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subcube {
    dim: CubeDim,
    fixed_mask: u32,
    fixed_values: u32,
}

impl Subcube {
    pub fn new(dim: CubeDim, fixed_mask: u32, fixed_values: u32) -> Result<Self> {
        if fixed_mask & !dim.coord_mask() != 0 || fixed_values & !fixed_mask != 0 {
            return Err(CubeError::InvalidSubcube {
                mask: fixed_mask,
                values: fixed_values,
            });
        }
        Ok(Subcube {
            dim,
            fixed_mask,
            fixed_values,
        })
    }

    /// Subcube from `(coordinate, value)` pairs with 1-based coordinates.
    pub fn fixing(dim: CubeDim, fixed: &[(usize, bool)]) -> Result<Self> {
        let mut mask = 0;
        let mut values = 0;
        for &(coord, value) in fixed {
            let c = dim.check_coord(coord)?;
            mask |= 1 << c;
            if value {
                values |= 1 << c;
            }
        }
        Subcube::new(dim, mask, values)
    }

    pub fn dim(&self) -> CubeDim {
        self.dim
    }

    pub fn fixed_mask(&self) -> u32 {
        self.fixed_mask
    }

    pub fn fixed_values(&self) -> u32 {
        self.fixed_values
    }

    /// `m = n - |fixed positions|`.
    pub fn dimension(&self) -> u32 {
        self.dim.n() - self.fixed_mask.count_ones()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.0 & self.fixed_mask == self.fixed_values
    }

    pub fn vertices(&self) -> VertexSet {
        let free = self.dim.coord_mask() & !self.fixed_mask;
        let mut set = VertexSet::empty(self.dim);
        let mut sub = 0u32;
        loop {
            set.insert(Vertex(self.fixed_values | sub));
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                break;
            }
        }
        set
    }

    /// Same fixed positions, fixed values differing in exactly one of them.
    pub fn is_adjacent(&self, other: &Subcube) -> Result<bool> {
        self.dim.check_same(other.dim)?;
        Ok(self.fixed_mask == other.fixed_mask
            && (self.fixed_values ^ other.fixed_values).count_ones() == 1)
    }

    /// Pattern such as `1*0`: fixed values at fixed positions, `*` elsewhere.
    pub fn render(&self) -> String {
        (0..self.dim.n())
            .map(|b| {
                if (self.fixed_mask >> b) & 1 == 0 {
                    '*'
                } else if (self.fixed_values >> b) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// Inverse of [`Subcube::render`].
    pub fn parse_pattern(dim: CubeDim, pattern: &str) -> Option<Subcube> {
        let chars: Vec<char> = pattern.trim().chars().collect();
        if chars.len() != dim.n() as usize {
            return None;
        }
        let mut mask = 0;
        let mut values = 0;
        for (b, ch) in chars.into_iter().enumerate() {
            match ch {
                '*' => {}
                '0' => mask |= 1 << b,
                '1' => {
                    mask |= 1 << b;
                    values |= 1 << b;
                }
                _ => return None,
            }
        }
        Subcube::new(dim, mask, values).ok()
    }
}
