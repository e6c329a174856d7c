//! Mean and covariance of the distance summaries in the two-class linear
//! model `X = A x`, `Y = B y + mu` (coordinates of `x`, `y` i.i.d., mean zero,
//! finite fourth moment).
//!
//! For a training point `X_1` the summary is
//! `D(X_1) = (mean_{k != 1} |X_k - X_1|^2, mean_l |Y_l - X_1|^2)`, and a test
//! point `W` uses all `n` class-X points in the first component.
//!
//! Writing `S_k = |X_k - X_1|^2` and `T_l = |Y_l - X_1|^2`,
//!
//! ```text
//! Var D_X = (E S^2 + (n - 2) E S_2 S_3) / (n - 1) - f1^2
//! Cov     = E S_2 T_1 - f1 f2
//! Var D_Y = (E T^2 + (m - 1) E T_1 T_2) / m - f2^2
//! ```
//!
//! where the single-distance fourth moment `E |X - U - mu_u|^4` is
//! [`moment_h2`] and the product of two distances sharing an endpoint
//! `E |X - U - mu_u|^2 |X - V - mu_v|^2` is [`moment_h1`]. A test point
//! replaces `n` by `n + 1`.
//!
//! The quadruple index sums of `E |A x|^4` reduce to
//! `m4 sum_k c_k^2 + m2^2 (|A|_F^4 + 2 |A'A|_F^2 - 3 sum_k c_k^2)` with
//! `c_k` the squared column norms, and `E |A x|^2 A x = m3 A c`. The literal
//! loops live in [`reference`] for cross-checking.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::distributions::RawMoments;
use crate::error::{Error, Result};

/// Inputs of the two-class linear model.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSpec {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub mu: DVector<f64>,
    pub moments_x: RawMoments,
    pub moments_y: RawMoments,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl MomentSpec {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        mu: DVector<f64>,
        moments_x: RawMoments,
        moments_y: RawMoments,
        n: usize,
        m: usize,
    ) -> Result<Self> {
        let spec = MomentSpec {
            a,
            b,
            mu,
            moments_x,
            moments_y,
            n,
            m,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.a.nrows();
        if d == 0 || !self.a.is_square() || self.b.shape() != (d, d) || self.mu.len() != d {
            return Err(Error::invalid(
                "A and B must be square of the same dimension as mu",
            ));
        }
        self.moments_x.validate()?;
        self.moments_y.validate()?;
        if self.n < 2 || self.m < 2 {
            return Err(Error::invalid(format!(
                "class sizes must be at least 2, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// Exchanges the roles of the classes: `(A, B, mu, F_x, F_y, n, m)` becomes
    /// `(B, A, -mu, F_y, F_x, m, n)`.
    pub fn swapped(&self) -> MomentSpec {
        MomentSpec {
            a: self.b.clone(),
            b: self.a.clone(),
            mu: -&self.mu,
            moments_x: self.moments_y,
            moments_y: self.moments_x,
            n: self.m,
            m: self.n,
        }
    }
}

/// Means and covariances of `D(X_i)`, `D(Y_j)`, `D(W_x)`, `D(W_y)`. Every
/// summary lists the mean distance to class X first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryMoments {
    pub mu_dx: [f64; 2],
    pub mu_dy: [f64; 2],
    pub mu_dwx: [f64; 2],
    pub mu_dwy: [f64; 2],
    pub sig_dx: [[f64; 2]; 2],
    pub sig_dy: [[f64; 2]; 2],
    pub sig_dwx: [[f64; 2]; 2],
    pub sig_dwy: [[f64; 2]; 2],
}

impl SummaryMoments {
    /// `(name, value)` for all 20 scalar components; covariances contribute
    /// their (1,1), (1,2), (2,2) entries.
    pub fn components(&self) -> Vec<(String, f64)> {
        let mut out = Vec::with_capacity(20);
        for (name, v) in [
            ("mu_dx", self.mu_dx),
            ("mu_dy", self.mu_dy),
            ("mu_dwx", self.mu_dwx),
            ("mu_dwy", self.mu_dwy),
        ] {
            out.push((format!("{name}[1]"), v[0]));
            out.push((format!("{name}[2]"), v[1]));
        }
        for (name, s) in [
            ("sig_dx", self.sig_dx),
            ("sig_dy", self.sig_dy),
            ("sig_dwx", self.sig_dwx),
            ("sig_dwy", self.sig_dwy),
        ] {
            out.push((format!("{name}[1,1]"), s[0][0]));
            out.push((format!("{name}[1,2]"), s[0][1]));
            out.push((format!("{name}[2,2]"), s[1][1]));
        }
        out
    }
}

/// Matrix quantities shared by several moment terms.
#[derive(Debug, Clone)]
struct FactorStats {
    fro2: f64,
    /// squared column norms `c_k`
    col_sq: DVector<f64>,
    col_sq_sq: f64,
    gram_fro2: f64,
}

impl FactorStats {
    fn new(a: &DMatrix<f64>) -> Self {
        let col_sq = DVector::from_iterator(a.ncols(), a.column_iter().map(|c| c.norm_squared()));
        let gram = a.tr_mul(a);
        FactorStats {
            fro2: a.norm_squared(),
            col_sq_sq: col_sq.norm_squared(),
            col_sq,
            gram_fro2: gram.norm_squared(),
        }
    }

    /// Statistics of `s A`.
    fn scaled(&self, s: f64) -> Self {
        let s2 = s * s;
        FactorStats {
            fro2: self.fro2 * s2,
            col_sq: &self.col_sq * s2,
            col_sq_sq: self.col_sq_sq * s2 * s2,
            gram_fro2: self.gram_fro2 * s2 * s2,
        }
    }

    /// `E |A x|^4`
    fn fourth(&self, mom: &RawMoments) -> f64 {
        mom.m4 * self.col_sq_sq
            + mom.m2
                * mom.m2
                * (self.fro2 * self.fro2 + 2.0 * self.gram_fro2 - 3.0 * self.col_sq_sq)
    }

    /// `E |A x|^2 (A x)' v = m3 (A c)' v`
    fn skew_dot(&self, a: &DMatrix<f64>, mom: &RawMoments, v: &DVector<f64>) -> f64 {
        if mom.m3 == 0.0 {
            return 0.0;
        }
        mom.m3 * (a * &self.col_sq).dot(v)
    }
}

/// One anchor factor with its statistics.
struct Factor<'a> {
    mat: &'a DMatrix<f64>,
    stats: &'a FactorStats,
    mom: RawMoments,
}

/// A mean-zero partner `C u` reduced to what the moments need.
struct Partner<'a> {
    factor: Factor<'a>,
    /// `|A' C|_F^2` with the anchor `A`
    cross_fro2: f64,
}

fn h1_eval(
    anchor: &Factor<'_>,
    fro2_u: f64,
    mom_u: &RawMoments,
    mu_u: &DVector<f64>,
    fro2_v: f64,
    mom_v: &RawMoments,
    mu_v: &DVector<f64>,
) -> f64 {
    let m2x = anchor.mom.m2;
    let s = m2x * anchor.stats.fro2;
    let ep = mom_u.m2 * fro2_u + mu_u.norm_squared();
    let eq = mom_v.m2 * fro2_v + mu_v.norm_squared();
    let at_mu_u = anchor.mat.tr_mul(mu_u);
    let at_mu_v = anchor.mat.tr_mul(mu_v);
    anchor.stats.fourth(&anchor.mom)
        - 2.0
            * anchor
                .stats
                .skew_dot(anchor.mat, &anchor.mom, &(mu_u + mu_v))
        + s * (ep + eq)
        + 4.0 * m2x * at_mu_u.dot(&at_mu_v)
        + ep * eq
}

fn h2_eval(anchor: &Factor<'_>, partner: &Partner<'_>, mu_u: &DVector<f64>) -> f64 {
    let (mx, mu) = (&anchor.mom, &partner.factor.mom);
    let sx = mx.m2 * anchor.stats.fro2;
    let su = mu.m2 * partner.factor.stats.fro2;
    let mu2 = mu_u.norm_squared();
    let at_mu = anchor.mat.tr_mul(mu_u).norm_squared();
    let ct_mu = partner.factor.mat.tr_mul(mu_u).norm_squared();
    anchor.stats.fourth(mx)
        + partner.factor.stats.fourth(mu)
        + 4.0 * mx.m2 * mu.m2 * partner.cross_fro2
        + 2.0 * sx * su
        + 4.0 * (mx.m2 * at_mu + mu.m2 * ct_mu)
        + mu2 * mu2
        - 4.0
            * (anchor.stats.skew_dot(anchor.mat, mx, mu_u)
                - partner.factor.stats.skew_dot(partner.factor.mat, mu, mu_u))
        + 2.0 * mu2 * (sx + su)
}

fn check_square(d: usize, mats: &[&DMatrix<f64>], vecs: &[&DVector<f64>]) -> Result<()> {
    if d == 0 || mats.iter().any(|m| m.shape() != (d, d)) || vecs.iter().any(|v| v.len() != d) {
        return Err(Error::invalid(
            "all matrices must be d x d and all vectors length d",
        ));
    }
    Ok(())
}

/// `E |X - U - mu_u|^2 |X - V - mu_v|^2` for independent `X = A x`,
/// `U = C u`, `V = D v`.
#[allow(clippy::too_many_arguments)]
pub fn moment_h1(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    mu_u: &DVector<f64>,
    mu_v: &DVector<f64>,
    mom_x: RawMoments,
    mom_u: RawMoments,
    mom_v: RawMoments,
) -> Result<f64> {
    check_square(a.nrows(), &[a, c, d], &[mu_u, mu_v])?;
    let stats = FactorStats::new(a);
    let anchor = Factor {
        mat: a,
        stats: &stats,
        mom: mom_x,
    };
    Ok(h1_eval(
        &anchor,
        c.norm_squared(),
        &mom_u,
        mu_u,
        d.norm_squared(),
        &mom_v,
        mu_v,
    ))
}

/// `E |X - U - mu_u|^4` for independent `X = A x`, `U = C u`.
pub fn moment_h2(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    mu_u: &DVector<f64>,
    mom_x: RawMoments,
    mom_u: RawMoments,
) -> Result<f64> {
    check_square(a.nrows(), &[a, c], &[mu_u])?;
    let sa = FactorStats::new(a);
    let sc = FactorStats::new(c);
    let anchor = Factor {
        mat: a,
        stats: &sa,
        mom: mom_x,
    };
    let partner = Partner {
        factor: Factor {
            mat: c,
            stats: &sc,
            mom: mom_u,
        },
        cross_fro2: a.tr_mul(c).norm_squared(),
    };
    Ok(h2_eval(&anchor, &partner, mu_u))
}

/// Cached evaluator for one spec: three Gram products in total.
struct Evaluator<'a> {
    spec: &'a MomentSpec,
    sa: FactorStats,
    sb: FactorStats,
    cross_ab: f64,
    zero: DVector<f64>,
    neg_mu: DVector<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(spec: &'a MomentSpec) -> Result<Self> {
        spec.validate()?;
        let (sa, sb) = (FactorStats::new(&spec.a), FactorStats::new(&spec.b));
        let cross_ab = spec.a.tr_mul(&spec.b).norm_squared();
        Ok(Self::with_stats(spec, sa, sb, cross_ab))
    }

    fn with_stats(spec: &'a MomentSpec, sa: FactorStats, sb: FactorStats, cross_ab: f64) -> Self {
        Evaluator {
            sa,
            sb,
            cross_ab,
            zero: DVector::zeros(spec.dim()),
            neg_mu: -&spec.mu,
            spec,
        }
    }

    fn summary(&self) -> SummaryMoments {
        SummaryMoments {
            mu_dx: self.f(Side::X),
            mu_dy: self.f(Side::Y),
            mu_dwx: self.f(Side::X),
            mu_dwy: self.f(Side::Y),
            sig_dx: self.g(Side::X, false),
            sig_dy: self.g(Side::Y, false),
            sig_dwx: self.g(Side::X, true),
            sig_dwy: self.g(Side::Y, true),
        }
    }

    /// (anchor, other, shift, anchor moments, other moments, anchor count,
    /// other count) for a side.
    fn oriented(&self, side: Side) -> (Factor<'_>, Factor<'_>, &DVector<f64>, usize, usize) {
        let s = self.spec;
        match side {
            Side::X => (
                Factor {
                    mat: &s.a,
                    stats: &self.sa,
                    mom: s.moments_x,
                },
                Factor {
                    mat: &s.b,
                    stats: &self.sb,
                    mom: s.moments_y,
                },
                &s.mu,
                s.n,
                s.m,
            ),
            Side::Y => (
                Factor {
                    mat: &s.b,
                    stats: &self.sb,
                    mom: s.moments_y,
                },
                Factor {
                    mat: &s.a,
                    stats: &self.sa,
                    mom: s.moments_x,
                },
                &self.neg_mu,
                s.m,
                s.n,
            ),
        }
    }

    /// Mean in (same class, other class) order.
    fn f_oriented(&self, side: Side) -> [f64; 2] {
        let (own, other, shift, _, _) = self.oriented(side);
        let own2 = own.mom.m2 * own.stats.fro2;
        [
            2.0 * own2,
            own2 + other.mom.m2 * other.stats.fro2 + shift.norm_squared(),
        ]
    }

    fn f(&self, side: Side) -> [f64; 2] {
        to_label_order(side, self.f_oriented(side))
    }

    fn g(&self, side: Side, test_sample: bool) -> [[f64; 2]; 2] {
        let (own, other, shift, n_own, n_other) = self.oriented(side);
        let f = self.f_oriented(side);
        // a test point sees all n_own same-class points: n -> n + 1
        let n = (n_own + usize::from(test_sample)) as f64;
        let m = n_other as f64;
        let own_fro = own.stats.fro2;
        let other_fro = other.stats.fro2;
        let self_partner = Partner {
            factor: Factor {
                mat: own.mat,
                stats: own.stats,
                mom: own.mom,
            },
            cross_fro2: own.stats.gram_fro2,
        };
        let other_partner = Partner {
            factor: Factor {
                mat: other.mat,
                stats: other.stats,
                mom: other.mom,
            },
            cross_fro2: self.cross_ab,
        };
        let zero = &self.zero;
        let h2_same = h2_eval(&own, &self_partner, zero);
        let h1_same = h1_eval(&own, own_fro, &own.mom, zero, own_fro, &own.mom, zero);
        let h1_mixed = h1_eval(&own, own_fro, &own.mom, zero, other_fro, &other.mom, shift);
        let h2_cross = h2_eval(&own, &other_partner, shift);
        let h1_cross = h1_eval(
            &own, other_fro, &other.mom, shift, other_fro, &other.mom, shift,
        );
        let g11 = (h2_same + (n - 2.0) * h1_same) / (n - 1.0) - f[0] * f[0];
        let g12 = h1_mixed - f[0] * f[1];
        let g22 = (h2_cross + (m - 1.0) * h1_cross) / m - f[1] * f[1];
        let [[s11, s12], [_, s22]] = [[g11, g12], [g12, g22]];
        match side {
            Side::X => [[s11, s12], [s12, s22]],
            Side::Y => [[s22, s12], [s12, s11]],
        }
    }
}

/// Summaries are indexed by class label (distance to X first), while the
/// oriented formulas put the point's own class first.
fn to_label_order(side: Side, v: [f64; 2]) -> [f64; 2] {
    match side {
        Side::X => v,
        Side::Y => [v[1], v[0]],
    }
}

/// Mean of `D(X_i)` (side X) or `D(Y_j)` (side Y); test points share it.
pub fn moment_f(spec: &MomentSpec, side: Side) -> Result<[f64; 2]> {
    spec.validate()?;
    let x = spec.moments_x.m2 * spec.a.norm_squared();
    let y = spec.moments_y.m2 * spec.b.norm_squared();
    let cross = x + y + spec.mu.norm_squared();
    Ok(match side {
        Side::X => [2.0 * x, cross],
        Side::Y => [cross, 2.0 * y],
    })
}

/// Covariance of `D(X_i)`/`D(Y_j)`, or of a test point's summary when
/// `test_sample` is set.
pub fn moment_g(spec: &MomentSpec, side: Side, test_sample: bool) -> Result<[[f64; 2]; 2]> {
    Ok(Evaluator::new(spec)?.g(side, test_sample))
}

/// All eight population quantities.
pub fn summary_moments(spec: &MomentSpec) -> Result<SummaryMoments> {
    Ok(Evaluator::new(spec)?.summary())
}

/// Specs of the form `B = s A` for one fixed `A`. The Gram product of `A` is
/// computed once and rescaled for every `s`, which keeps grids over `s` and
/// `mu` cheap at large `d`.
#[derive(Debug, Clone)]
pub struct ScaledFactorFamily {
    a: DMatrix<f64>,
    stats: FactorStats,
}

impl ScaledFactorFamily {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        check_square(a.nrows(), &[&a], &[])?;
        let stats = FactorStats::new(&a);
        Ok(ScaledFactorFamily { a, stats })
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// The moment inputs with `B = scale * A`.
    pub fn spec(
        &self,
        scale: f64,
        mu: DVector<f64>,
        moments_x: RawMoments,
        moments_y: RawMoments,
        n: usize,
        m: usize,
    ) -> Result<MomentSpec> {
        MomentSpec::new(
            self.a.clone(),
            &self.a * scale,
            mu,
            moments_x,
            moments_y,
            n,
            m,
        )
    }

    /// [`summary_moments`] of [`Self::spec`] without new Gram products.
    pub fn summary_moments(&self, spec: &MomentSpec, scale: f64) -> Result<SummaryMoments> {
        spec.validate()?;
        if spec.a != self.a || spec.b != &self.a * scale {
            return Err(Error::invalid("spec is not a member of this factor family"));
        }
        let sb = self.stats.scaled(scale);
        let cross = self.stats.gram_fro2 * scale * scale;
        Ok(Evaluator::with_stats(spec, self.stats.clone(), sb, cross).summary())
    }
}

/// Literal index-sum evaluation of the same moments, `O(d^4)`. Only for
/// cross-checking small dimensions.
pub mod reference {
    use super::*;

    /// `E |A x|^4` from the quadruple sum over `(i, j, k1, k2)`.
    pub fn fourth_naive(a: &DMatrix<f64>, mom: &RawMoments) -> f64 {
        let d = a.nrows();
        let mut total = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut diag = 0.0;
                let mut split = 0.0;
                let mut paired = 0.0;
                for k1 in 0..d {
                    diag += a[(i, k1)].powi(2) * a[(j, k1)].powi(2);
                    for k2 in 0..d {
                        if k1 != k2 {
                            split += a[(i, k1)].powi(2) * a[(j, k2)].powi(2);
                            paired += a[(i, k1)] * a[(i, k2)] * a[(j, k1)] * a[(j, k2)];
                        }
                    }
                }
                total += diag * mom.m4 + (split + 2.0 * paired) * mom.m2 * mom.m2;
            }
        }
        total
    }

    /// `sum_i sum_j sum_k a_ik^2 a_jk v_j`, times `m3`.
    pub fn skew_naive(a: &DMatrix<f64>, mom: &RawMoments, v: &DVector<f64>) -> f64 {
        let d = a.nrows();
        let mut total = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    total += a[(i, k)].powi(2) * a[(j, k)] * v[j];
                }
            }
        }
        mom.m3 * total
    }

    fn fro2(a: &DMatrix<f64>) -> f64 {
        a.iter().map(|v| v * v).sum()
    }

    /// `|A' v|^2` by explicit sums.
    fn quad(a: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let d = a.nrows();
        (0..d)
            .map(|k| {
                let x: f64 = (0..d).map(|i| a[(i, k)] * u[i]).sum();
                let y: f64 = (0..d).map(|i| a[(i, k)] * v[i]).sum();
                x * y
            })
            .sum()
    }

    #[allow(clippy::too_many_arguments)]
    pub fn h1_naive(
        a: &DMatrix<f64>,
        c: &DMatrix<f64>,
        dm: &DMatrix<f64>,
        mu_u: &DVector<f64>,
        mu_v: &DVector<f64>,
        mx: RawMoments,
        mu: RawMoments,
        mv: RawMoments,
    ) -> f64 {
        let n2 = |v: &DVector<f64>| v.iter().map(|x| x * x).sum::<f64>();
        let (cu, dv, ax) = (fro2(c) * mu.m2, fro2(dm) * mv.m2, fro2(a) * mx.m2);
        cu * dv
            + dv * n2(mu_u)
            + fourth_naive(a, &mx)
            + (cu + dv) * ax
            + (n2(mu_u) + n2(mu_v)) * ax
            + n2(mu_u) * n2(mu_v)
            - 2.0 * skew_naive(a, &mx, &(mu_u + mu_v))
            + cu * n2(mu_v)
            + 4.0 * mx.m2 * quad(a, mu_u, mu_v)
    }

    pub fn h2_naive(
        a: &DMatrix<f64>,
        c: &DMatrix<f64>,
        mu_u: &DVector<f64>,
        mx: RawMoments,
        mu: RawMoments,
    ) -> f64 {
        let d = a.nrows();
        let mu2: f64 = mu_u.iter().map(|x| x * x).sum();
        let (cu, ax) = (fro2(c) * mu.m2, fro2(a) * mx.m2);
        let mut at_c = 0.0;
        for i in 0..d {
            for j in 0..d {
                let e: f64 = (0..d).map(|k| a[(k, i)] * c[(k, j)]).sum();
                at_c += e * e;
            }
        }
        2.0 * mu2 * (cu + ax)
            + 4.0 * quad(c, mu_u, mu_u) * mu.m2
            + fourth_naive(c, &mu)
            + fourth_naive(a, &mx)
            + 4.0 * skew_naive(c, &mu, mu_u)
            - 4.0 * skew_naive(a, &mx, mu_u)
            + 4.0 * quad(a, mu_u, mu_u) * mx.m2
            + 2.0 * cu * ax
            + mu2 * mu2
            + 4.0 * at_c * mu.m2 * mx.m2
    }
}

/// Text form of a [`MomentSpec`] (TOML with a schema field).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSpecDocument {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub mu: Vec<f64>,
    pub moments_x: RawMoments,
    pub moments_y: RawMoments,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

pub const MOMENT_SPEC_SCHEMA: u32 = 1;

impl MomentSpec {
    pub fn to_document(&self) -> MomentSpecDocument {
        let rows = |m: &DMatrix<f64>| m.row_iter().map(|r| r.iter().copied().collect()).collect();
        MomentSpecDocument {
            schema: MOMENT_SPEC_SCHEMA,
            n: self.n,
            m: self.m,
            mu: self.mu.iter().copied().collect(),
            moments_x: self.moments_x,
            moments_y: self.moments_y,
            a: rows(&self.a),
            b: rows(&self.b),
        }
    }

    pub fn from_document(doc: &MomentSpecDocument) -> Result<Self> {
        if doc.schema != MOMENT_SPEC_SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported moment spec schema {}",
                doc.schema
            )));
        }
        let d = doc.mu.len();
        let mat = |rows: &Vec<Vec<f64>>, name: &str| {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Parse(format!("{name} must be {d}x{d}")));
            }
            Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
        };
        MomentSpec::new(
            mat(&doc.a, "a")?,
            mat(&doc.b, "b")?,
            DVector::from_vec(doc.mu.clone()),
            doc.moments_x,
            doc.moments_y,
            doc.n,
            doc.m,
        )
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_document()).expect("moment spec serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let doc: MomentSpecDocument =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}
