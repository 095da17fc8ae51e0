//! Phase-one simplex over exact rationals.
//!
//! Solves feasibility of `{x >= 0 : a_i x >= b_i or a_i x = b_i}`. On
//! infeasibility the final phase-one duals give a Farkas certificate.
//!
//! Rows have integer coefficients and are pivoted fraction-free: every
//! tableau entry is an integer over one shared positive denominator. Pricing uses
//! the most negative reduced cost until the first degenerate pivot and
//! Bland's rule from then on, which rules out cycling. Arithmetic runs on
//! `i128` first and restarts on `BigInt` if any operation would overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<BigInt>,
    pub sense: Sense,
    pub rhs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    /// A nonnegative point satisfying every row.
    Feasible(Vec<BigRational>),
    /// One multiplier per row: nonnegative on `Ge` rows, free on `Eq` rows,
    /// with `sum y_i a_i <= 0` componentwise and `sum y_i b_i > 0`.
    Infeasible(Vec<BigRational>),
}

/// Exact integer for the tableau; `None` signals overflow.
trait Int: Clone + Ord + Zero + One + Signed {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn plus(&self, o: &Self) -> Option<Self>;
    fn minus(&self, o: &Self) -> Option<Self>;
    fn times(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn exact_div(&self, o: &Self) -> Self;
}

impl Int for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Int for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn minus(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

/// `a/b < c/d` for positive `b`, `d`.
fn less<T: Int>(a: &T, b: &T, c: &T, d: &T) -> Option<bool> {
    Some(a.times(d)? < c.times(b)?)
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    /// Shared denominator of every entry, always positive.
    denom: T,
    basis: Vec<usize>,
    bland: bool,
}

impl<T: Int> Tableau<T> {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let denom = &self.denom;
        let eliminate = |target: &mut Vec<T>| -> Option<()> {
            let factor = target[c].clone();
            for (t, q) in target.iter_mut().zip(&pivot_row) {
                let scaled = t.times(&p)?;
                let v =
                    if factor.is_zero() || q.is_zero() { scaled } else { scaled.minus(&factor.times(q)?)? };
                *t = v.exact_div(denom);
            }
            Some(())
        };
        for i in 0..self.rows.len() {
            if i != r {
                eliminate(&mut self.rows[i])?;
            }
        }
        eliminate(&mut self.obj)?;
        self.rows[r] = pivot_row;
        self.denom = p;
        self.basis[r] = c;
        Some(())
    }

    fn entering(&self) -> Option<usize> {
        let rhs = self.rhs();
        if self.bland {
            return (0..rhs).find(|&j| self.obj[j].is_negative());
        }
        let mut best: Option<usize> = None;
        for j in 0..rhs {
            if self.obj[j].is_negative() && best.is_none_or(|b| self.obj[j] < self.obj[b]) {
                best = Some(j);
            }
        }
        best
    }

    /// One pivot; `Some(false)` at optimality, `None` on overflow.
    fn step(&mut self) -> Option<bool> {
        let rhs = self.rhs();
        let Some(c) = self.entering() else {
            return Some(false);
        };
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[c].is_positive() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    let (rb, cb) = (&self.rows[b][rhs], &self.rows[b][c]);
                    less(&row[rhs], &row[c], rb, cb)?
                        || (!less(rb, cb, &row[rhs], &row[c])? && self.basis[i] < self.basis[b])
                }
            };
            if better {
                best = Some(i);
            }
        }
        let r = best.expect("phase one is bounded below");
        if self.rows[r][rhs].is_zero() {
            self.bland = true;
        }
        self.pivot(r, c)?;
        Some(true)
    }
}

fn run<T: Int>(rows: &[Row], nvars: usize) -> Option<LpResult> {
    let nrows = rows.len();
    let nslack = rows.iter().filter(|r| r.sense == Sense::Ge).count();
    let art0 = nvars + nslack;
    let width = art0 + nrows + 1;
    let mut tab = Tableau {
        rows: Vec::with_capacity(nrows),
        obj: vec![T::zero(); width],
        denom: T::one(),
        basis: Vec::with_capacity(nrows),
        bland: false,
    };
    // rows with a negative right side are negated
    let mut flipped = Vec::with_capacity(nrows);
    let mut slack = nvars;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.coeffs.len(), nvars, "row width");
        let flip = row.rhs.is_negative();
        flipped.push(flip);
        let signed = |v: &BigInt| T::from_big(&if flip { -v } else { v.clone() });
        let mut t = vec![T::zero(); width];
        for (dst, a) in t.iter_mut().zip(&row.coeffs) {
            *dst = signed(a)?;
        }
        if row.sense == Sense::Ge {
            t[slack] = if flip { T::one() } else { -T::one() };
            slack += 1;
        }
        t[art0 + i] = T::one();
        t[width - 1] = signed(&row.rhs)?;
        tab.rows.push(t);
        tab.basis.push(art0 + i);
    }
    for j in (0..art0).chain(std::iter::once(width - 1)) {
        let mut sum = T::zero();
        for row in &tab.rows {
            sum = sum.plus(&row[j])?;
        }
        tab.obj[j] = -sum;
    }

    while tab.step()? {}

    let rhs = tab.rhs();
    let denom = tab.denom.to_big();
    let value = |v: &T| BigRational::new(v.to_big(), denom.clone());
    if tab.obj[rhs].is_zero() {
        let mut x = vec![BigRational::zero(); nvars];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < nvars {
                x[b] = value(&tab.rows[i][rhs]);
            }
        }
        Some(LpResult::Feasible(x))
    } else {
        // dual of a tableau row is 1 minus the reduced cost of its artificial
        let y = (0..nrows)
            .map(|i| {
                let dual = BigRational::one() - value(&tab.obj[art0 + i]);
                if flipped[i] {
                    -dual
                } else {
                    dual
                }
            })
            .collect();
        Some(LpResult::Infeasible(y))
    }
}

pub fn phase_one(rows: &[Row], nvars: usize) -> LpResult {
    run::<i128>(rows, nvars).or_else(|| run::<BigInt>(rows, nvars)).expect("big integers never overflow")
}

/// Write rationals as integers over their least common denominator.
fn common_denominator(values: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values.iter().map(|v| v.numer() * (&d / v.denom())).collect();
    (nums, d)
}

pub fn satisfies(rows: &[Row], x: &[BigRational]) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    let (xs, d) = common_denominator(x);
    rows.iter().all(|row| {
        let mut lhs = BigInt::zero();
        for (a, v) in row.coeffs.iter().zip(&xs) {
            if !a.is_zero() && !v.is_zero() {
                lhs += a * v;
            }
        }
        let rhs = &row.rhs * &d;
        match row.sense {
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    })
}

/// Check a Farkas certificate from scratch.
pub fn verify_farkas(rows: &[Row], nvars: usize, y: &[BigRational]) -> bool {
    if y.len() != rows.len() {
        return false;
    }
    if rows.iter().zip(y).any(|(r, v)| r.sense == Sense::Ge && v.is_negative()) {
        return false;
    }
    let (ys, _) = common_denominator(y);
    let mut combined = vec![BigInt::zero(); nvars];
    let mut bound = BigInt::zero();
    for (row, v) in rows.iter().zip(&ys) {
        if v.is_zero() {
            continue;
        }
        for (c, a) in combined.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *c += v * a;
            }
        }
        bound += v * &row.rhs;
    }
    combined.iter().all(|c| !c.is_positive()) && bound.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn row(coeffs: &[i64], sense: Sense, rhs: i64) -> Row {
        Row { coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(), sense, rhs: BigInt::from(rhs) }
    }

    #[test]
    fn feasible_system() {
        let rows = [row(&[1, 1], Sense::Eq, 4), row(&[1, -1], Sense::Ge, 2)];
        let LpResult::Feasible(x) = phase_one(&rows, 2) else { panic!() };
        assert!(satisfies(&rows, &x));
    }

    #[test]
    fn infeasible_system() {
        // x + y = 1 and x + y >= 3
        let rows = [row(&[1, 1], Sense::Eq, 1), row(&[1, 1], Sense::Ge, 3)];
        let LpResult::Infeasible(y) = phase_one(&rows, 2) else { panic!() };
        assert!(verify_farkas(&rows, 2, &y));
    }

    #[test]
    fn negative_right_sides() {
        // -x >= -1, x >= 2
        let rows = [row(&[-1], Sense::Ge, -1), row(&[1], Sense::Ge, 2)];
        let LpResult::Infeasible(y) = phase_one(&rows, 1) else { panic!() };
        assert!(verify_farkas(&rows, 1, &y));
        let rows = [row(&[-1], Sense::Ge, -3), row(&[1], Sense::Ge, 2)];
        let LpResult::Feasible(x) = phase_one(&rows, 1) else { panic!() };
        assert!(satisfies(&rows, &x));
    }

    #[test]
    fn bad_certificates_are_rejected() {
        let rows = [row(&[1, 1], Sense::Eq, 1), row(&[1, 1], Sense::Ge, 3)];
        assert!(!verify_farkas(&rows, 2, &[q(1), q(-1)]));
        assert!(!verify_farkas(&rows, 2, &[q(0), q(0)]));
        assert!(!verify_farkas(&rows, 2, &[q(-1)]));
        assert!(verify_farkas(&rows, 2, &[q(-1), q(1)]));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's cycling instance, scaled to integers, as a feasibility question
        let rows = [
            row(&[-1, 32, 4, -36], Sense::Ge, 0),
            row(&[-1, 24, 1, -6], Sense::Ge, 0),
            row(&[0, 0, -1, 0], Sense::Ge, -1),
            row(&[1, 1, 1, 1], Sense::Ge, 1),
        ];
        let LpResult::Feasible(x) = phase_one(&rows, 4) else { panic!() };
        assert!(satisfies(&rows, &x));
    }

    #[test]
    fn fractional_witness() {
        // 2x + 3y = 1, x - y >= 0
        let rows = [row(&[2, 3], Sense::Eq, 1), row(&[1, -1], Sense::Ge, 0)];
        let LpResult::Feasible(x) = phase_one(&rows, 2) else { panic!() };
        assert!(satisfies(&rows, &x));
        assert!(!satisfies(&rows, &[q(1) / q(3), q(1) / q(3)]));
    }

    #[test]
    fn overflow_falls_back_to_big_rationals() {
        let huge = BigInt::from(10).pow(40);
        let rows = [
            Row { coeffs: vec![huge.clone(), BigInt::one()], sense: Sense::Eq, rhs: &huge * 3 },
            row(&[1, 0], Sense::Ge, 2),
        ];
        assert!(i128::from_big(&huge).is_none());
        let LpResult::Feasible(x) = phase_one(&rows, 2) else { panic!() };
        assert!(satisfies(&rows, &x));
    }
}
