//! Certified real-root brackets via Sturm sequences.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{int, rat, IntPoly, Rational, UniPoly};

/// Sturm chain of a nonzero polynomial, each member stored as a primitive
/// integer polynomial (positive rescaling does not change sign counts).
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
    head: IntPoly,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::RootIsolation("Sturm chain of the zero polynomial".into()));
        }
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            // Keep coefficients small: normalise by the absolute leading coefficient.
            let r = if r.is_zero() { r } else { r.scale(&(-r.leading().abs().recip())) };
            seq.push(r);
        }
        seq.pop();
        Ok(SturmChain {
            chain: seq.iter().map(IntPoly::from_unipoly).collect(),
            head: IntPoly::from_unipoly(p),
        })
    }

    fn variations<F: Fn(&IntPoly) -> Ordering>(&self, sign: F) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in self.chain.iter().map(sign) {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        self.variations(|p| p.sign_at(x))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.head.sign_at(x)
    }
}

/// A bracket `[lower, upper]` around a real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroBracket {
    #[serde(serialize_with = "crate::sphere::ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "crate::sphere::ser_rational")]
    pub upper: Rational,
    /// The polynomial has exactly one root in `(lower, upper]`, of
    /// opposite exact signs at the two ends, and it is the root sought.
    pub certified: bool,
}

impl ZeroBracket {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn overlaps(&self, other: &ZeroBracket) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lower + &self.upper) / int(2)
    }
}

/// Cauchy bound: every real root has absolute value below the result.
pub fn root_bound(p: &UniPoly) -> Rational {
    let lead = p.leading().abs();
    let max = p
        .coeffs()
        .iter()
        .rev()
        .skip(1)
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

/// Brackets the smallest root of `p` in the open-closed interval
/// `(floor, ceiling]` to width at most `width`.
///
/// Sturm counts certify that no root lies in `(floor, lower]`; once the
/// bracket holds a single root the refinement continues on exact signs.
pub fn smallest_root_above(
    p: &UniPoly,
    floor: &Rational,
    ceiling: &Rational,
    width: &Rational,
) -> Result<ZeroBracket> {
    if !width.is_positive() {
        return Err(Error::InvalidParameter(format!("bracket width must be positive, got {width}")));
    }
    let sturm = SturmChain::new(p)?;
    if sturm.count_roots(floor, ceiling) == 0 {
        return Err(Error::RootIsolation(format!(
            "no root in ({floor}, {ceiling}]"
        )));
    }
    let two = int(2);
    let mut lo = floor.clone();
    let mut hi = ceiling.clone();
    // Invariant: no root in (floor, lo], at least one in (lo, hi].
    while sturm.count_roots(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if sturm.count_roots(&lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Exactly one root in (lo, hi]. Refine on signs.
    let mut s_hi = sturm.sign_at(&hi);
    while &hi - &lo > *width || s_hi == Ordering::Equal || sturm.sign_at(&lo) == Ordering::Equal {
        if s_hi == Ordering::Equal {
            // Root sits exactly on `hi`: step past it by a small amount and
            // keep the single-root property.
            let step = (&hi - &lo).min(width.clone()) / int(4);
            let new_hi = &hi + &step;
            if sturm.count_roots(&lo, &new_hi) == 1 {
                let new_lo = &hi - &step;
                lo = new_lo.max(lo);
                hi = new_hi;
                s_hi = sturm.sign_at(&hi);
                continue;
            }
            return Err(Error::RootIsolation("could not separate an exact root".into()));
        }
        let s_lo = sturm.sign_at(&lo);
        if s_lo == Ordering::Equal {
            // `lo` is the previous root (or floor); nudge inside.
            lo = (&lo + &hi) / &two;
            if sturm.count_roots(&lo, &hi) != 1 {
                return Err(Error::RootIsolation("lost the root while refining".into()));
            }
            continue;
        }
        let mid = (&lo + &hi) / &two;
        let s_mid = sturm.sign_at(&mid);
        if s_mid == Ordering::Equal {
            let step = (&hi - &lo) / int(4);
            lo = &mid - &step;
            hi = &mid + &step;
            s_hi = sturm.sign_at(&hi);
        } else if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
            s_hi = s_mid;
        }
    }
    let certified = sturm.count_roots(&lo, &hi) == 1
        && sturm.count_roots(floor, &lo) == 0
        && sturm.sign_at(&lo) != sturm.sign_at(&hi);
    Ok(ZeroBracket {
        lower: lo,
        upper: hi,
        certified,
    })
}

/// Smallest positive root of `p`, bracketed to `width`.
pub fn smallest_positive_root(p: &UniPoly, width: &Rational) -> Result<ZeroBracket> {
    let bound = root_bound(p);
    smallest_root_above(p, &Rational::zero(), &bound, width)
}

/// Default bracket width `2^-64`.
pub fn default_width() -> Rational {
    rat(1, 1) / Rational::from_integer(num_bigint::BigInt::one() << 64u32)
}
