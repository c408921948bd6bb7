use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `(e_1, …, e_d)` of `x_1^{e_1} ⋯ x_d^{e_d}`.
///
/// Ordered graded-lexicographically: total degree first, ties broken by
/// comparing exponents of `x_1`, then `x_2`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The constant monomial `1` in `dim` variables.
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    /// `x_{var+1}^power` (zero-based `var`).
    pub fn var_pow(dim: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; dim];
        e[var] = power;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Bitmask of odd exponents. Multiplying by even powers preserves it.
    pub fn parity_class(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, e)| acc | (u64::from(e & 1) << i))
    }

    /// Returns a copy with the exponent of `var` changed by `delta`, or
    /// `None` if that would go negative.
    pub fn shifted(&self, var: usize, delta: i64) -> Option<Monomial> {
        let e = i64::from(self.0[var]) + delta;
        if e < 0 {
            return None;
        }
        let mut out = self.0.clone();
        out[var] = e as u32;
        Some(Monomial(out))
    }

    /// Appends one trailing variable carrying exponent `last_power`.
    pub fn extended(&self, last_power: u32) -> Monomial {
        let mut out = self.0.clone();
        out.push(last_power);
        Monomial(out)
    }

    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm[i]] = e;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree `degree` in `dim` variables, ascending.
pub fn monomials_of_degree(dim: usize, degree: u32) -> Vec<Monomial> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
    out.sort();
    out
}
