//! Integer-structure solvers: membership in Z + beta*Z, Bezout
//! coefficients, and integer kernels of small rational linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{is_squarefree, FieldError, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("arguments {0} and {1} are not coprime")]
    NotCoprime(BigInt, BigInt),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A witnessed solution of `x = k + l*beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub k: BigInt,
    pub l: BigInt,
    /// true iff beta is irrational (the pair is then forced).
    pub unique: bool,
}

impl Representation {
    /// Re-check the defining equation in exact field arithmetic.
    fn checked(self, x: &QuadExt, beta: &QuadExt) -> Self {
        let exact = beta
            .scale_int(&self.l)
            .add(&QuadExt::rational(BigRational::from_integer(self.k.clone())))
            .expect("k + l*beta stays in beta's field");
        assert_eq!(&exact, x, "representation must satisfy x = k + l*beta exactly");
        self
    }
}

/// Decide whether `x` lies in `Z + beta*Z` and produce a witness.
///
/// For irrational `beta` the witness is unique. For rational `beta = p/q`
/// the canonical representative has `0 <= l < q`.
pub fn represent(x: &QuadExt, beta: &QuadExt) -> Option<Representation> {
    if let Some(b) = beta.as_rational() {
        // Z + (p/q)Z = (1/q)Z
        let xr = x.as_rational()?;
        let p = b.numer();
        let q = b.denom(); // positive by canonicality
        let qx = xr * BigRational::from_integer(q.clone());
        if !qx.is_integer() {
            return None;
        }
        let qx = qx.to_integer();
        if b.is_zero() {
            if xr.is_integer() {
                return Some(
                    Representation { k: xr.to_integer(), l: BigInt::zero(), unique: false }
                        .checked(x, beta),
                );
            }
            return None;
        }
        // solve l*p = q*x (mod q), canonical 0 <= l < q
        let inv = mod_inverse(p, q)?;
        let l = (&qx * inv).mod_floor(q);
        let k = (&qx - &l * p) / q;
        return Some(Representation { k, l, unique: false }.checked(x, beta));
    }
    // beta irrational
    if let Some(xr) = x.as_rational() {
        if xr.is_integer() {
            return Some(
                Representation { k: xr.to_integer(), l: BigInt::zero(), unique: true }
                    .checked(x, beta),
            );
        }
        return None;
    }
    if x.radicand() != beta.radicand() {
        // independent surds: no integer combination
        return None;
    }
    // equate coordinates over {1, sqrt(d)}
    let l = x.surd_part() / beta.surd_part();
    if !l.is_integer() {
        return None;
    }
    let k = x.rational_part() - &l * beta.rational_part();
    if !k.is_integer() {
        return None;
    }
    Some(Representation { k: k.to_integer(), l: l.to_integer(), unique: true }.checked(x, beta))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Integers `(m, n)` with `p*m - q*n = 1`, canonical `0 <= m < q` for
/// `q > 1` and `(1, p-1)` for `q == 1`.
pub fn bezout(p: &BigInt, q: &BigInt) -> Result<(BigInt, BigInt), LatticeError> {
    assert!(q.is_positive(), "bezout requires q > 0");
    if !p.gcd(q).is_one() {
        return Err(LatticeError::NotCoprime(p.clone(), q.clone()));
    }
    if q.is_one() {
        return Ok((BigInt::one(), p - BigInt::one()));
    }
    let m = mod_inverse(p, q).expect("coprime arguments are invertible");
    let n = (p * &m - BigInt::one()) / q;
    Ok((m, n))
}

/// Basis of the integer solution lattice of
/// `alpha*k1 + (alpha*beta)*l1 - k2 - beta*l2 = 0`
/// in the unknown quadruple `(k1, k2, l1, l2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleLattice {
    /// column-style Hermite-normal basis vectors `(k1, k2, l1, l2)`
    pub basis: Vec<[BigInt; 4]>,
}

impl QuadrupleLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Coordinates of a value over the composite Q-basis
/// `{1, sqrt(d1), sqrt(d2), sqrt(d1*d2)}`. For a shared radicand only the
/// first two slots are used.
fn composite_coords(
    v: &QuadExt,
    d1: u64,
    d2: u64,
) -> [BigRational; 4] {
    let mut c = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    c[0] = v.rational_part().clone();
    match v.radicand() {
        0 => {}
        d if d == d1 => c[1] = v.surd_part().clone(),
        d if d == d2 => c[2] = v.surd_part().clone(),
        d => {
            // must be the reduced product radicand
            debug_assert_eq!(d, reduced_product_radicand(d1, d2).1);
            c[3] = v.surd_part().clone();
        }
    }
    c
}

/// `d1*d2 = g^2 * m` with `m` squarefree; returns `(g, m)`.
fn reduced_product_radicand(d1: u64, d2: u64) -> (u64, u64) {
    let g = num_integer::gcd(d1, d2);
    (g, (d1 / g) * (d2 / g))
}

/// Cross-field product, defined when the result stays inside a single
/// quadratic field (in particular whenever a factor is rational or both
/// are pure surds).
pub fn mul_cross(a: &QuadExt, b: &QuadExt) -> Option<QuadExt> {
    if let Ok(p) = a.mul(b) {
        return Some(p);
    }
    // distinct irrational radicands: a0*b0 + a1*b0 sd1 + a0*b1 sd2 + a1*b1 sd1d2
    let (d1, d2) = (a.radicand(), b.radicand());
    let s1 = a.surd_part() * b.rational_part();
    let s2 = a.rational_part() * b.surd_part();
    let s12 = a.surd_part() * b.surd_part();
    let mut surds = 0;
    if !s1.is_zero() {
        surds += 1;
    }
    if !s2.is_zero() {
        surds += 1;
    }
    if !s12.is_zero() {
        surds += 1;
    }
    if surds > 1 {
        return None; // lives in the biquadratic field only
    }
    let x0 = a.rational_part() * b.rational_part();
    if !s1.is_zero() {
        return QuadExt::new(x0, s1, d1).ok();
    }
    if !s2.is_zero() {
        return QuadExt::new(x0, s2, d2).ok();
    }
    if !s12.is_zero() {
        let (g, m) = reduced_product_radicand(d1, d2);
        let coeff = s12 * BigRational::from_integer(BigInt::from(g));
        if m == 1 {
            return Some(QuadExt::rational(x0 + coeff));
        }
        if !is_squarefree(m) {
            return None;
        }
        return QuadExt::new(x0, coeff, m).ok();
    }
    Some(QuadExt::rational(x0))
}

/// Cross-field quotient; `None` when the exact value provably lies
/// outside every quadratic field (or the divisor is zero).
pub fn div_cross(a: &QuadExt, b: &QuadExt) -> Option<QuadExt> {
    if b.is_zero() {
        return None;
    }
    if let Ok(q) = a.div(b) {
        return Some(q);
    }
    // a/b = a * conj(b) / norm(b); the conjugate product is handled by
    // the cross-field multiplication above.
    let inv_norm = b.norm().recip();
    let conj = b.conjugate();
    let prod = mul_cross(a, &conj)?;
    Some(prod.scale_rat(&inv_norm))
}

/// Basis of `{v in Z^4 : M v = 0}` for a rational matrix with 4 columns,
/// normalized to column-style Hermite form.
pub fn integer_kernel(matrix: &[[BigRational; 4]]) -> Vec<[BigInt; 4]> {
    // clear denominators row by row
    let rows: Vec<[BigInt; 4]> = matrix
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for e in row.iter() {
                lcm = lcm.lcm(e.denom());
            }
            let lcm_rat = BigRational::from_integer(lcm);
            let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
            for (o, e) in out.iter_mut().zip(row.iter()) {
                *o = (e * &lcm_rat).to_integer();
            }
            out
        })
        .collect();

    // unimodular column elimination: work = rows applied to columns of U
    let n = 4usize;
    let mut work: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect(); // u[j] is the j-th column as a length-4 vector

    let mut lead = 0usize;
    for r in 0..work.len() {
        if lead >= n {
            break;
        }
        // gcd-eliminate row r across columns lead..n
        loop {
            let mut pivot: Option<usize> = None;
            for j in lead..n {
                if !work[r][j].is_zero() {
                    pivot = match pivot {
                        Some(p) if work[r][p].magnitude() <= work[r][j].magnitude() => Some(p),
                        _ => Some(j),
                    };
                }
            }
            let Some(p) = pivot else { break };
            let mut done = true;
            for j in lead..n {
                if j == p || work[r][j].is_zero() {
                    continue;
                }
                let q = div_round(&work[r][j], &work[r][p]);
                if !q.is_zero() {
                    for row in work.iter_mut() {
                        let sub = &row[p] * &q;
                        row[j] -= sub;
                    }
                    let sub: Vec<BigInt> = u[p].iter().map(|x| x * &q).collect();
                    for (a, b) in u[j].iter_mut().zip(sub.iter()) {
                        *a -= b;
                    }
                }
                if !work[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                work.swap_remove_cols(lead, p);
                u.swap(lead, p);
                lead += 1;
                break;
            }
        }
    }

    let kernel: Vec<[BigInt; 4]> = (lead..n)
        .map(|j| {
            let col = &u[j];
            [col[0].clone(), col[1].clone(), col[2].clone(), col[3].clone()]
        })
        .collect();

    // every kernel vector must annihilate the original rows
    for v in &kernel {
        for row in &rows {
            let dot: BigInt = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero(), "kernel vector fails exact annihilation");
        }
    }

    hermite_normalize(kernel)
}

trait SwapCols {
    fn swap_remove_cols(&mut self, a: usize, b: usize);
}

impl SwapCols for Vec<Vec<BigInt>> {
    fn swap_remove_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer quotient keeps remainders small
    BigRational::new(a.clone(), b.clone()).round().to_integer()
}

/// Column-style Hermite normal form of a basis (vectors as columns of a
/// 4 x k matrix): positive pivots, entries in later columns reduced.
fn hermite_normalize(mut basis: Vec<[BigInt; 4]>) -> Vec<[BigInt; 4]> {
    if basis.is_empty() {
        return basis;
    }
    let k = basis.len();
    let mut col = 0usize;
    for row in 0..4 {
        if col >= k {
            break;
        }
        // gcd-combine columns col..k on this row
        loop {
            let mut pivot: Option<usize> = None;
            for j in col..k {
                if !basis[j][row].is_zero() {
                    pivot = match pivot {
                        Some(p) if basis[p][row].magnitude() <= basis[j][row].magnitude() => {
                            Some(p)
                        }
                        _ => Some(j),
                    };
                }
            }
            let Some(p) = pivot else { break };
            let mut done = true;
            for j in col..k {
                if j == p || basis[j][row].is_zero() {
                    continue;
                }
                let q = div_round(&basis[j][row].clone(), &basis[p][row].clone());
                if !q.is_zero() {
                    for i in 0..4 {
                        let sub = &basis[p][i] * &q;
                        basis[j][i] -= sub;
                    }
                }
                if !basis[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                basis.swap(col, p);
                if basis[col][row].is_negative() {
                    for e in basis[col].iter_mut() {
                        *e = -std::mem::take(e);
                    }
                }
                // reduce earlier columns against this pivot
                let pv = basis[col][row].clone();
                for j in 0..col {
                    let q = basis[j][row].div_floor(&pv);
                    if !q.is_zero() {
                        for i in 0..4 {
                            let sub = &basis[col][i] * &q;
                            basis[j][i] -= sub;
                        }
                    }
                }
                col += 1;
                break;
            }
        }
    }
    basis.truncate(col);
    basis
}

/// Solution lattice of `alpha = (k2 + beta*l2) / (k1 + beta*l1)`, i.e. of
/// `alpha*k1 + (alpha*beta)*l1 - k2 - beta*l2 = 0`, over the composite
/// basis of the radicands involved.
pub fn solve_ratio(alpha: &QuadExt, beta: &QuadExt) -> QuadrupleLattice {
    assert!(!alpha.is_rational() && !beta.is_rational(), "solve_ratio needs irrational arguments");
    let d1 = alpha.radicand();
    let d2 = beta.radicand();

    let alpha_beta = mul_cross(alpha, beta);

    // coefficient columns in unknown order (k1, k2, l1, l2)
    let minus_one = QuadExt::from_int(-1);
    let neg_beta = beta.neg();

    let mut rows: Vec<[BigRational; 4]> = Vec::new();
    let coeff = |v: &QuadExt| composite_coords(v, d1, d2);

    match alpha_beta {
        Some(ab) => {
            let cols = [coeff(alpha), coeff(&minus_one), coeff(&ab), coeff(&neg_beta)];
            for b in 0..4 {
                let row = [
                    cols[0][b].clone(),
                    cols[1][b].clone(),
                    cols[2][b].clone(),
                    cols[3][b].clone(),
                ];
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
        None => {
            // alpha*beta spans two independent surd directions; expand
            // the product coordinates by hand over the 4-element basis.
            // (a0 + a1 s1)(b0 + b1 s2) = a0b0 + a1b0 s1 + a0b1 s2 + a1b1 s12
            let a0 = alpha.rational_part();
            let a1 = alpha.surd_part();
            let b0 = beta.rational_part();
            let b1 = beta.surd_part();
            let ab = [a0 * b0, a1 * b0, a0 * b1, a1 * b1];
            let ca = coeff(alpha);
            let cm = coeff(&minus_one);
            let cb = coeff(&neg_beta);
            for b in 0..4 {
                let row = [ca[b].clone(), cm[b].clone(), ab[b].clone(), cb[b].clone()];
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }

    let basis = integer_kernel(&rows);

    // every basis vector satisfies the field equation exactly
    for v in &basis {
        assert!(
            quadruple_satisfies(alpha, beta, v),
            "lattice vector fails the defining field equation"
        );
    }

    QuadrupleLattice { basis }
}

/// Exact check of `alpha*(k1 + l1*beta) = k2 + l2*beta`.
pub fn quadruple_satisfies(alpha: &QuadExt, beta: &QuadExt, v: &[BigInt; 4]) -> bool {
    let [k1, k2, l1, l2] = v;
    let lhs_inner = match beta
        .scale_int(l1)
        .add(&QuadExt::rational(BigRational::from_integer(k1.clone())))
    {
        Ok(x) => x,
        Err(_) => return false,
    };
    let lhs = match mul_cross(alpha, &lhs_inner) {
        Some(x) => x,
        None => return false,
    };
    let rhs = match beta
        .scale_int(l2)
        .add(&QuadExt::rational(BigRational::from_integer(k2.clone())))
    {
        Ok(x) => x,
        Err(_) => return false,
    };
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> QuadExt {
        QuadExt::sqrt(2).unwrap()
    }

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn represent_same_field() {
        let x = QuadExt::with_sqrt(3, 2, 2).unwrap();
        let r = represent(&x, &sqrt2()).unwrap();
        assert_eq!((r.k, r.l, r.unique), (bi(3), bi(2), true));
    }

    #[test]
    fn represent_integer_against_irrational() {
        let r = represent(&QuadExt::from_int(5), &sqrt2()).unwrap();
        assert_eq!((r.k, r.l, r.unique), (bi(5), bi(0), true));
    }

    #[test]
    fn represent_half_fails() {
        assert_eq!(represent(&QuadExt::from_frac(1, 2), &sqrt2()), None);
    }

    #[test]
    fn represent_rational_beta_canonical() {
        let r = represent(&QuadExt::from_frac(7, 3), &QuadExt::from_frac(1, 3)).unwrap();
        assert_eq!((r.k, r.l, r.unique), (bi(2), bi(1), false));
    }

    #[test]
    fn represent_cross_radicand_none() {
        let x = QuadExt::sqrt(3).unwrap();
        assert_eq!(represent(&x, &sqrt2()), None);
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout(&bi(3), &bi(2)).unwrap(), (bi(1), bi(1)));
        assert_eq!(bezout(&bi(1), &bi(1)).unwrap(), (bi(1), bi(0)));
        assert_eq!(bezout(&bi(5), &bi(3)).unwrap(), (bi(2), bi(3)));
        assert!(matches!(bezout(&bi(4), &bi(2)), Err(LatticeError::NotCoprime(_, _))));
    }

    #[test]
    fn bezout_negative_p() {
        let (m, n) = bezout(&bi(-3), &bi(2)).unwrap();
        assert_eq!(&bi(-3) * &m - &bi(2) * &n, bi(1));
        assert!(m >= bi(0) && m < bi(2));
    }

    fn rq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn kernel_examples() {
        let row = [rq(1, 1), rq(0, 1), rq(-1, 1), rq(0, 1)];
        let k = integer_kernel(&[row]);
        assert_eq!(k.len(), 3);
        assert!(lattice_contains(&k, &[bi(1), bi(0), bi(1), bi(0)]));

        let rows = [
            [rq(1, 1), rq(0, 1), rq(0, 1), rq(0, 1)],
            [rq(0, 1), rq(1, 1), rq(0, 1), rq(0, 1)],
        ];
        let k = integer_kernel(&rows);
        assert_eq!(k.len(), 2);
        assert!(lattice_contains(&k, &[bi(0), bi(0), bi(1), bi(0)]));
        assert!(lattice_contains(&k, &[bi(0), bi(0), bi(0), bi(1)]));

        let row = [rq(1, 2), rq(0, 1), rq(-1, 1), rq(0, 1)];
        let k = integer_kernel(&[row]);
        assert!(lattice_contains(&k, &[bi(2), bi(0), bi(1), bi(0)]));
    }

    /// Membership of an integer vector in the span of an HNF basis.
    pub fn lattice_contains(basis: &[[BigInt; 4]], v: &[BigInt; 4]) -> bool {
        // HNF columns: solve greedily by pivot rows
        let mut rem = v.clone();
        for b in basis {
            let pivot_row = (0..4).find(|&i| !b[i].is_zero());
            let Some(pr) = pivot_row else { continue };
            if rem[pr].is_zero() {
                continue;
            }
            let (q, r) = rem[pr].div_rem(&b[pr]);
            if !r.is_zero() {
                return false;
            }
            for i in 0..4 {
                let sub = &b[i] * &q;
                rem[i] -= sub;
            }
        }
        rem.iter().all(|x| x.is_zero())
    }

    #[test]
    fn solve_ratio_sqrt2_self() {
        let a = sqrt2();
        let lat = solve_ratio(&a, &a);
        assert_eq!(lat.rank(), 2);
        assert!(lattice_contains(&lat.basis, &[bi(1), bi(0), bi(0), bi(1)]));
        assert!(lattice_contains(&lat.basis, &[bi(0), bi(2), bi(1), bi(0)]));
    }

    #[test]
    fn solve_ratio_distinct_radicands() {
        let lat = solve_ratio(&sqrt2(), &QuadExt::sqrt(3).unwrap());
        assert_eq!(lat.rank(), 0);
    }

    #[test]
    fn solve_ratio_one_plus_sqrt2_over_sqrt2() {
        // brute-force oracle over |k|,|l| <= 3 confirms the lattice
        let alpha = QuadExt::with_sqrt(1, 1, 2).unwrap();
        let beta = sqrt2();
        let lat = solve_ratio(&alpha, &beta);
        let mut oracle = Vec::new();
        for k1 in -3i64..=3 {
            for k2 in -3i64..=3 {
                for l1 in -3i64..=3 {
                    for l2 in -3i64..=3 {
                        let v = [bi(k1), bi(k2), bi(l1), bi(l2)];
                        if quadruple_satisfies(&alpha, &beta, &v) {
                            oracle.push(v);
                        }
                    }
                }
            }
        }
        for v in &oracle {
            assert!(lattice_contains(&lat.basis, v), "oracle vector {v:?} missing");
        }
        assert_eq!(lat.rank(), 2);
        // the tempting candidate (1,1,1,1): (1+√2)(1+√2) = 3+2√2 ≠ 1+√2,
        // so it must NOT satisfy the equation
        assert!(!quadruple_satisfies(&alpha, &beta, &[bi(1), bi(1), bi(1), bi(1)]));
        // but e.g. alpha*(1+0·β)=1+1·β gives (1,1,0,1)
        assert!(quadruple_satisfies(&alpha, &beta, &[bi(1), bi(1), bi(0), bi(1)]));
    }

    #[test]
    fn cross_mul_pure_surds() {
        let a = sqrt2();
        let b = QuadExt::sqrt(3).unwrap();
        let p = mul_cross(&a, &b).unwrap();
        assert_eq!(p, QuadExt::sqrt(6).unwrap());
        // sqrt6 / sqrt2 = sqrt3
        let q = div_cross(&QuadExt::sqrt(6).unwrap(), &a).unwrap();
        assert_eq!(q, QuadExt::sqrt(3).unwrap());
        // (1+√2)(1+√3) leaves every quadratic field
        let x = QuadExt::with_sqrt(1, 1, 2).unwrap();
        let y = QuadExt::with_sqrt(1, 1, 3).unwrap();
        assert_eq!(mul_cross(&x, &y), None);
    }
}
