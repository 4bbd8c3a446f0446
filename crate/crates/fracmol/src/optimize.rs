//! Bracketed one-dimensional search over positive abscissae, shared by the
//! peak-time and optimal-observation-time computations.
//!
//! Objectives are evaluated in log-abscissa coordinates because the physical
//! time scales span several decades; a relative tolerance on t is then an
//! absolute tolerance on ln t.

/// Outcome of the geometric bracket scan.
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Scan t = t0 · 2^j for j in [-j_max, j_max] and bracket the maximizer of
/// `f`. Returns `None` when the best sample sits on the scan boundary, i.e.
/// no interior maximum was found.
pub(crate) fn bracket_max_geometric<E>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    t0: f64,
    j_max: i32,
) -> Result<Option<Bracket>, E> {
    let mut best_j = None;
    let mut best_val = f64::NEG_INFINITY;
    for j in -j_max..=j_max {
        let t = t0 * (j as f64).exp2();
        let v = f(t)?;
        if v > best_val {
            best_val = v;
            best_j = Some(j);
        }
    }
    match best_j {
        Some(j) if j > -j_max && j < j_max && best_val.is_finite() => Ok(Some(Bracket {
            lo: t0 * ((j - 1) as f64).exp2(),
            hi: t0 * ((j + 1) as f64).exp2(),
        })),
        _ => Ok(None),
    }
}

/// Golden-section maximization of `f` on [lo, hi] in log coordinates,
/// to a relative tolerance `rel_tol` on the abscissa.
pub(crate) fn golden_max<E>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64, E> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1.exp())?;
    let mut f2 = f(x2.exp())?;
    while b - a > rel_tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2.exp())?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1.exp())?;
        }
    }
    Ok((0.5 * (a + b)).exp())
}
