//! Minimizers used by the Whittle criteria: bounded 1-d search for the
//! per-component initialization, quasi-Newton (BFGS with central
//! finite-difference gradients) for the multivariate stage.
//!
//! Criteria may return `+inf` as an infeasibility sentinel; both searches
//! only compare values, so the sentinel simply repels the iterates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::float::Float;

/// Options for [`quasi_newton`].
#[derive(Debug, Clone)]
pub struct QnOptions<T: Float> {
    /// Relative step for central finite-difference gradients.
    pub grad_step: T,
    /// Relative tolerance on the criterion decrease.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Float> Default for QnOptions<T> {
    fn default() -> Self {
        Self {
            grad_step: T::cst(1e-6),
            tol: T::cst(1e-8),
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Optimum<T: Float> {
    pub x: DVector<T>,
    pub value: T,
    pub iterations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105;

/// Brent minimization of `f` on `[a, b]`.
pub fn brent_min<T: Float, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    tol: T,
    max_iter: usize,
) -> (T, T) {
    let cgold = T::cst(GOLDEN);
    let zeps = T::cst(1e-14);
    let half = T::cst(0.5);
    let two = T::cst(2.0);
    let (mut lo, mut hi) = (a, b);
    let mut x = lo + cgold * (hi - lo);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut step = T::zero();
    let mut step_prev = T::zero();
    for _ in 0..max_iter {
        let xm = half * (lo + hi);
        let tol1 = tol * x.abs() + zeps;
        let tol2 = two * tol1;
        if (x - xm).abs() <= tol2 - half * (hi - lo) {
            break;
        }
        let mut use_golden = true;
        if step_prev.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            // parabola through (x, fx), (w, fw), (v, fv)
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = two * (q0 - r);
            if q > T::zero() {
                p = -p;
            } else {
                q = -q;
            }
            let ok = q != T::zero()
                && p.abs() < (half * q * step_prev).abs()
                && p > q * (lo - x)
                && p < q * (hi - x);
            if ok {
                step_prev = step;
                step = p / q;
                let u = x + step;
                if u - lo < tol2 || hi - u < tol2 {
                    step = if xm >= x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            step_prev = if x >= xm { lo - x } else { hi - x };
            step = cgold * step_prev;
        }
        let u = if step.abs() >= tol1 {
            x + step
        } else if step >= T::zero() {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

fn gradient<T: Float, F: FnMut(&DVector<T>) -> T>(
    f: &mut F,
    x: &DVector<T>,
    rel_step: T,
) -> Option<DVector<T>> {
    let p = x.len();
    let mut g = DVector::<T>::zeros(p);
    let mut xp = x.clone();
    for i in 0..p {
        let h = rel_step * T::one().max(x[i].abs());
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        if !(fp.is_finite() && fm.is_finite()) {
            return None;
        }
        g[i] = (fp - fm) / (h + h);
    }
    Some(g)
}

/// BFGS minimization from `x0`; non-convergence after `max_iter` iterations
/// is an error carrying the best iterate found.
pub fn quasi_newton<T: Float, F: FnMut(&DVector<T>) -> T>(
    mut f: F,
    x0: DVector<T>,
    opts: &QnOptions<T>,
) -> Result<Optimum<T>> {
    let p = x0.len();
    let c1 = T::cst(1e-4);
    let half = T::cst(0.5);
    let mut x = x0;
    let mut fx = f(&x);
    if !fx.is_finite() {
        return Err(Error::InvalidParameter(
            "criterion is not finite at the initial point".into(),
        ));
    }
    let mut g = gradient(&mut f, &x, opts.grad_step).ok_or_else(|| {
        Error::InvalidParameter("criterion gradient is not finite at the initial point".into())
    })?;
    let mut hinv = DMatrix::<T>::identity(p, p);
    for iter in 1..=opts.max_iter {
        let mut dir = -(&hinv * &g);
        if dir.dot(&g) >= T::zero() {
            hinv = DMatrix::identity(p, p);
            dir = -g.clone();
        }
        let slope = dir.dot(&g);
        // backtracking Armijo search
        let mut alpha = T::one();
        let mut x_new = &x + &dir * alpha;
        let mut f_new = f(&x_new);
        let mut ls = 0;
        while !(f_new.is_finite() && f_new <= fx + c1 * alpha * slope) && ls < 45 {
            alpha *= half;
            x_new = &x + &dir * alpha;
            f_new = f(&x_new);
            ls += 1;
        }
        if ls == 45 {
            // no progress along a gradient-related direction: stationary
            return Ok(Optimum {
                x,
                value: fx,
                iterations: iter,
            });
        }
        let g_new = match gradient(&mut f, &x_new, opts.grad_step) {
            Some(g) => g,
            None => {
                return Ok(Optimum {
                    x: x_new,
                    value: f_new,
                    iterations: iter,
                })
            }
        };
        let decrease = fx - f_new;
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > T::cst(1e-12) * s.norm() * y.norm() {
            // BFGS inverse-Hessian update
            let rho = T::one() / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            let outer_ss = &s * s.transpose();
            let outer_hys = &hy * s.transpose();
            hinv = hinv + outer_ss * (rho * rho * yhy + rho)
                - (&outer_hys + outer_hys.transpose()) * rho;
        } else {
            hinv = DMatrix::identity(p, p);
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if decrease <= opts.tol * (T::one() + fx.abs()) {
            return Ok(Optimum {
                x,
                value: fx,
                iterations: iter,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        best_point: x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
        best_value: fx.to_f64().unwrap_or(f64::NAN),
    })
}
