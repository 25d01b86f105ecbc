//! Exact dyadic rationals `numer / 2^shift`, used for the fractional bounds.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy)]
pub struct Dyadic {
    numer: i128,
    shift: u32,
}

impl Dyadic {
    pub fn integer(value: i128) -> Self {
        Dyadic {
            numer: value,
            shift: 0,
        }
    }

    /// `2^exp` for any (possibly negative) exponent.
    pub fn pow2(exp: i32) -> Self {
        if exp >= 0 {
            Dyadic::integer(1i128 << exp)
        } else {
            Dyadic {
                numer: 1,
                shift: exp.unsigned_abs(),
            }
        }
    }

    fn rescale(self, shift: u32) -> i128 {
        self.numer << (shift - self.shift)
    }

    fn normalized(mut self) -> Self {
        while self.shift > 0 && self.numer % 2 == 0 {
            self.numer /= 2;
            self.shift -= 1;
        }
        self
    }

    pub fn mul_int(self, k: i128) -> Self {
        Dyadic {
            numer: self.numer * k,
            shift: self.shift,
        }
        .normalized()
    }

    pub fn is_integer(self) -> bool {
        self.normalized().shift == 0
    }

    /// Smallest integer not below the value.
    pub fn ceil(self) -> i128 {
        let d = 1i128 << self.shift;
        self.numer.div_euclid(d) + i128::from(self.numer.rem_euclid(d) != 0)
    }

    pub fn as_f64(self) -> f64 {
        self.numer as f64 / (1u128 << self.shift) as f64
    }
}

impl std::ops::Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, other: Dyadic) -> Dyadic {
        let shift = self.shift.max(other.shift);
        Dyadic {
            numer: self.rescale(shift) - other.rescale(shift),
            shift,
        }
        .normalized()
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let shift = self.shift.max(other.shift);
        self.rescale(shift).cmp(&other.rescale(shift))
    }
}

impl From<u64> for Dyadic {
    fn from(v: u64) -> Self {
        Dyadic::integer(v.into())
    }
}

/// Exact decimal expansion; dyadic fractions always terminate.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.normalized();
        if v.numer < 0 {
            f.write_str("-")?;
        }
        let abs = v.numer.unsigned_abs();
        let d = 1u128 << v.shift;
        write!(f, "{}", abs / d)?;
        let mut rem = abs % d;
        if rem != 0 {
            f.write_str(".")?;
            while rem != 0 {
                rem *= 10;
                write!(f, "{}", rem / d)?;
                rem %= d;
            }
        }
        Ok(())
    }
}
