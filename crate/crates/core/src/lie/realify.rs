use std::sync::Arc;

use crate::exact_la::{GaussRat, Matrix, Rat};

use super::{LieAlgebra, LieError, LieModule};

/// Regards a complex algebra as a real one of twice the dimension.
///
/// The real basis is `Y₁, …, Y_m, iY₁, …, iY_m`.
pub fn realify(l: &LieAlgebra<GaussRat>) -> Result<LieAlgebra<Rat>, LieError> {
    let m = l.dim();
    let d = 2 * m;
    let mut s = vec![Rat::from_integer(0.into()); d * d * d];
    let mut set = |i: usize, j: usize, k: usize, v: Rat| s[(i * d + j) * d + k] = v;
    for a in 0..m {
        for b in 0..m {
            for k in 0..m {
                let c = l.c(a, b, k);
                let (p, q) = (c.re.clone(), c.im.clone());
                // [Y_a, Y_b] = p Y_k + q iY_k
                set(a, b, k, p.clone());
                set(a, b, m + k, q.clone());
                // [iY_a, Y_b] = [Y_a, iY_b] = −q Y_k + p iY_k
                set(m + a, b, k, -q.clone());
                set(m + a, b, m + k, p.clone());
                set(a, m + b, k, -q.clone());
                set(a, m + b, m + k, p.clone());
                // [iY_a, iY_b] = −[Y_a, Y_b]
                set(m + a, m + b, k, -p);
                set(m + a, m + b, m + k, -q);
            }
        }
    }
    let mut names = l.names().to_vec();
    names.extend(l.names().iter().map(|n| format!("i{n}")));
    LieAlgebra::from_tensor(names, s)
}

/// Realification of a complex module: `V` over the real basis
/// `v₁, …, vₙ, iv₁, …, ivₙ`, acted on by the realified algebra.
pub fn realify_module(
    module: &LieModule<GaussRat>,
    real_algebra: Arc<LieAlgebra<Rat>>,
) -> Result<LieModule<Rat>, LieError> {
    let n = module.dim();
    let block = |a: &Matrix<GaussRat>, times_i: bool| {
        let mut out = Matrix::<Rat>::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let z = &a[(r, c)];
                let (p, q) = if times_i {
                    (-z.im.clone(), z.re.clone())
                } else {
                    (z.re.clone(), z.im.clone())
                };
                out[(r, c)] = p.clone();
                out[(n + r, n + c)] = p;
                out[(n + r, c)] = q.clone();
                out[(r, n + c)] = -q;
            }
        }
        out
    };
    let mut actions: Vec<Matrix<Rat>> = module.actions().iter().map(|a| block(a, false)).collect();
    actions.extend(module.actions().iter().map(|a| block(a, true)));
    LieModule::new(real_algebra, actions)
}
