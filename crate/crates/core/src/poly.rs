//! Sparse homogeneous multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};

/// A polynomial in `x_1..x_n` whose terms all have the same total degree.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl HomogeneousPolynomial {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogeneousPolynomial {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.add_term(vec![0; nvars], value);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn monomial(exponents: Vec<u32>, coeff: Rational) -> Self {
        let mut p = Self::zero(exponents.len(), exponents.iter().sum());
        p.add_term(exponents, coeff);
        p
    }

    /// `Σ_{i ∈ vars} x_i`
    pub fn linear_sum(nvars: usize, vars: &[usize]) -> Self {
        let mut p = Self::zero(nvars, 1);
        for &i in vars {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, Rational::one());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, exponents: Vec<u32>, coeff: Rational) {
        debug_assert_eq!(exponents.len(), self.nvars);
        debug_assert_eq!(exponents.iter().sum::<u32>(), self.degree);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::ShapeMismatch(format!(
                "({} vars, degree {}) vs ({} vars, degree {})",
                self.nvars, self.degree, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        HomogeneousPolynomial {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch(format!(
                "product of polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    /// Exact quotient by `Σ_{i ∈ vars} x_i`. Errors if a remainder is left.
    pub fn div_exact_by_sum(&self, vars: &[usize]) -> Result<Self> {
        let lead = *vars
            .iter()
            .min()
            .ok_or_else(|| Error::invalid("division by an empty linear form"))?;
        let divisor_name = || {
            let names: Vec<String> = vars.iter().map(|i| format!("x{}", i + 1)).collect();
            names.join("+")
        };
        if self.degree == 0 {
            return Err(Error::NotDivisible(divisor_name()));
        }
        let mut rem = self.terms.clone();
        let mut quotient = Self::zero(self.nvars, self.degree - 1);
        // The lex-leading monomial of the divisor is x_lead, so the lex-leading
        // monomial of the remainder must contain it.
        while let Some((e, c)) = rem.pop_last() {
            if e[lead] == 0 {
                return Err(Error::NotDivisible(divisor_name()));
            }
            let mut q = e;
            q[lead] -= 1;
            for &v in vars.iter().filter(|&&v| v != lead) {
                let mut m = q.clone();
                m[v] += 1;
                let entry = rem.entry(m.clone()).or_insert_with(Rational::zero);
                *entry -= &c;
                if entry.is_zero() {
                    rem.remove(&m);
                }
            }
            quotient.add_term(q, c);
        }
        Ok(quotient)
    }

    /// Re-expresses the polynomial in `nvars` variables, sending variable `j`
    /// to position `positions[j]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.nvars);
        let mut out = Self::zero(nvars, self.degree);
        for (e, c) in &self.terms {
            let mut big = vec![0; nvars];
            for (j, &p) in positions.iter().enumerate() {
                big[p] += e[j];
            }
            out.add_term(big, c.clone());
        }
        out
    }

    /// Variable `j` becomes variable `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.embed(self.nvars, perm)
    }

    /// Invariant under all variable permutations.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            // adjacent transpositions generate the symmetric group
            (0..e.len().saturating_sub(1)).all(|i| {
                let mut t = e.clone();
                t.swap(i, i + 1);
                self.terms.get(&t) == Some(c)
            })
        })
    }
}

impl fmt::Debug for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn x(n: usize, i: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::linear_sum(n, &[i])
    }

    #[test]
    fn exact_division_by_linear_sum() {
        // (x+y)(x^2 - xy + y^2) = x^3 + y^3
        let cubes = x(2, 0).pow(3).add(&x(2, 1).pow(3)).unwrap();
        let q = cubes.div_exact_by_sum(&[0, 1]).unwrap();
        assert_eq!(q.coefficient(&[2, 0]), rat(1, 1));
        assert_eq!(q.coefficient(&[1, 1]), rat(-1, 1));
        assert_eq!(q.coefficient(&[0, 2]), rat(1, 1));
        let back = q.mul(&HomogeneousPolynomial::linear_sum(2, &[0, 1])).unwrap();
        assert_eq!(back, cubes);
    }

    #[test]
    fn non_divisible_is_reported() {
        let p = x(2, 0).pow(2).add(&x(2, 1).pow(2)).unwrap();
        assert!(matches!(p.div_exact_by_sum(&[0, 1]), Err(Error::NotDivisible(_))));
        assert!(HomogeneousPolynomial::one(3).div_exact_by_sum(&[0, 1, 2]).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(x(2, 0).add(&x(3, 0)).is_err());
        assert!(x(2, 0).add(&HomogeneousPolynomial::one(2)).is_err());
        assert_eq!(x(2, 0).mul(&x(2, 1)).unwrap().degree(), 2);
    }

    #[test]
    fn division_by_partial_sum() {
        // x2 * (x2 + x3) in three variables, divided by x2 + x3
        let p = x(3, 1).mul(&HomogeneousPolynomial::linear_sum(3, &[1, 2])).unwrap();
        assert_eq!(p.div_exact_by_sum(&[1, 2]).unwrap(), x(3, 1));
        assert!(p.div_exact_by_sum(&[0, 1]).is_err());
    }

    #[test]
    fn symmetry_and_embedding() {
        let s = HomogeneousPolynomial::linear_sum(3, &[0, 1, 2]).pow(2);
        assert!(s.is_symmetric());
        assert!(!x(3, 0).is_symmetric());
        let e = x(2, 1).embed(4, &[3, 0]);
        assert_eq!(e, x(4, 0));
    }
}
