//! Single-word kernels for `n <= 6`, where a vertex set is one `u64`.
//!
//! Counts run on three bit planes (degrees stay below 8). Hypercube
//! symmetries act on the bitmap through delta swaps: flipping coordinate `c`
//! swaps blocks of `2^c` bits, and transposing coordinates `i < j` swaps the
//! bits at `v` and `v + 2^j - 2^i` for every `v` with `x_i = 1`, `x_j = 0`.

pub const SMALL_MAX_N: u32 = 6;

const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

#[derive(Debug, Clone)]
pub struct SmallCube {
    n: u32,
    full: u64,
    /// `zero[c]`: vertices with bit `c` clear.
    zero: [u64; 6],
}

impl SmallCube {
    pub fn new(n: u32) -> Self {
        assert!(n <= SMALL_MAX_N, "single-word kernels need n <= 6");
        let full = if n == 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << n)) - 1
        };
        let mut zero = [0u64; 6];
        for (c, z) in zero.iter_mut().enumerate() {
            *z = LOW_HALF[c] & full;
        }
        SmallCube { n, full, zero }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    /// Number of subsets of `Q_n`, if it fits in a `u64`.
    pub fn subset_count(&self) -> Option<u64> {
        (self.n < 6).then(|| 1u64 << (1u32 << self.n))
    }

    /// Vertices whose neighbour across coordinate `c` lies in `bits`.
    #[inline]
    pub fn neighbors(&self, bits: u64, c: u32) -> u64 {
        let s = 1u32 << c;
        let z = self.zero[c as usize];
        ((bits >> s) & z) | ((bits << s) & !z & self.full)
    }

    /// Bit-sliced count, for every vertex, of its neighbours inside `bits`.
    #[inline]
    pub fn count_planes(&self, bits: u64) -> [u64; 3] {
        let mut p = [0u64; 3];
        for c in 0..self.n {
            let x = self.neighbors(bits, c);
            let c0 = p[0] & x;
            p[0] ^= x;
            let c1 = p[1] & c0;
            p[1] ^= c0;
            p[2] ^= c1;
        }
        p
    }

    /// Vertices whose count equals `k`.
    #[inline]
    pub fn equal(planes: &[u64; 3], k: u32) -> u64 {
        let pick = |b: usize, p: u64| if (k >> b) & 1 == 1 { p } else { !p };
        pick(0, planes[0]) & pick(1, planes[1]) & pick(2, planes[2])
    }

    /// Vertices whose count is below `k`.
    #[inline]
    pub fn below(planes: &[u64; 3], k: u32) -> u64 {
        (0..k).fold(0, |acc, t| acc | Self::equal(planes, t))
    }

    /// Smallest count over the members of `among`.
    #[inline]
    pub fn min_count(&self, planes: &[u64; 3], among: u64) -> Option<u32> {
        if among == 0 {
            return None;
        }
        (0..=self.n).find(|&k| Self::equal(planes, k) & among != 0)
    }

    pub fn min_degree(&self, bits: u64) -> Option<u32> {
        self.min_count(&self.count_planes(bits), bits)
    }

    pub fn degree(&self, bits: u64, v: u32) -> u32 {
        (0..self.n)
            .filter(|&c| (bits >> (v ^ (1 << c))) & 1 == 1)
            .count() as u32
    }

    /// Mask of vertices in the half `x_{c+1} = value`.
    #[inline]
    pub fn half(&self, c: u32, value: bool) -> u64 {
        if value {
            !self.zero[c as usize] & self.full
        } else {
            self.zero[c as usize]
        }
    }

    pub fn is_irreducible(&self, bits: u64) -> bool {
        bits != 0
            && (0..self.n)
                .all(|c| bits & self.half(c, false) != 0 && bits & self.half(c, true) != 0)
    }

    /// First half `(c, value)` that `bits` misses, in coordinate order.
    #[inline]
    pub fn missing_half(&self, bits: u64) -> Option<(u32, bool)> {
        for c in 0..self.n {
            for value in [false, true] {
                if bits & self.half(c, value) == 0 {
                    return Some((c, value));
                }
            }
        }
        None
    }

    /// Dimension of the subcube equal to `bits`, if `bits` is one.
    pub fn subcube_dim(&self, bits: u64) -> Option<u32> {
        let size = bits.count_ones();
        if size == 0 || !size.is_power_of_two() {
            return None;
        }
        let fixed = (0..self.n)
            .filter(|&c| bits & self.half(c, false) == 0 || bits & self.half(c, true) == 0)
            .count() as u32;
        let m = size.trailing_zeros();
        (self.n - fixed == m).then_some(m)
    }

    /// Image of `bits` under complementing coordinate `c`.
    #[inline]
    pub fn flip(&self, bits: u64, c: u32) -> u64 {
        let s = 1u32 << c;
        let z = self.zero[c as usize];
        ((bits & z) << s) | ((bits >> s) & z)
    }

    /// Image of `bits` under exchanging coordinates `i` and `j`.
    #[inline]
    pub fn transpose(&self, bits: u64, i: u32, j: u32) -> u64 {
        if i == j {
            return bits;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let shift = (1u32 << j) - (1u32 << i);
        let mask = !self.zero[i as usize] & self.zero[j as usize];
        let t = (bits ^ (bits >> shift)) & mask;
        bits ^ t ^ (t << shift)
    }

    /// Smallest bitmap (as an integer) in the orbit of `bits` under all
    /// `2^n · n!` cube automorphisms.
    ///
    /// Permutations follow Heap's algorithm, one transposition per step; for
    /// each, the `2^n` flip masks follow a Gray code, one flip per step.
    pub fn canonical(&self, bits: u64) -> u64 {
        let n = self.n as usize;
        let mut best = bits;
        let mut current = bits;
        self.scan_flips(current, &mut best);
        let mut counters = [0usize; 6];
        let mut i = 1;
        while i < n {
            if counters[i] < i {
                let a = if i % 2 == 0 { 0 } else { counters[i] };
                current = self.transpose(current, a as u32, i as u32);
                self.scan_flips(current, &mut best);
                counters[i] += 1;
                i = 1;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        best
    }

    #[inline]
    fn scan_flips(&self, start: u64, best: &mut u64) {
        let mut q = start;
        *best = (*best).min(q);
        for t in 1u32..(1u32 << self.n) {
            q = self.flip(q, t.trailing_zeros());
            *best = (*best).min(q);
        }
    }
}
