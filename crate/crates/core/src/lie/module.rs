use std::sync::Arc;

use crate::exact_la::Matrix;

use super::algebra::check_len;
use super::{LieAlgebra, LieError, LieField};

/// A finite-dimensional representation `a: g → gl(V)` given on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieModule<F> {
    algebra: Arc<LieAlgebra<F>>,
    actions: Vec<Matrix<F>>,
    dim: usize,
}

impl<F: LieField> LieModule<F> {
    /// Validates the representation law `a([Yᵢ,Yⱼ]) = [a(Yᵢ), a(Yⱼ)]`.
    pub fn new(algebra: Arc<LieAlgebra<F>>, actions: Vec<Matrix<F>>) -> Result<Self, LieError> {
        let m = algebra.dim();
        if actions.len() != m {
            return Err(LieError::ActionCount {
                expected: m,
                found: actions.len(),
            });
        }
        let dim = actions.first().map_or(0, Matrix::rows);
        for a in &actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(LieError::La(crate::exact_la::LaError::Shape {
                    left: (dim, dim),
                    right: (a.rows(), a.cols()),
                }));
            }
        }
        let module = LieModule {
            algebra,
            actions,
            dim,
        };
        for i in 0..m {
            for j in i + 1..m {
                let lhs = module.action_of(&module.algebra.bracket(
                    &module.algebra.basis_vector(i),
                    &module.algebra.basis_vector(j),
                ))?;
                let rhs = module.actions[i].commutator(&module.actions[j])?;
                if lhs != rhs {
                    return Err(LieError::RepresentationLaw { i, j });
                }
            }
        }
        Ok(module)
    }

    /// The adjoint module `a(x) = ad x`.
    pub fn adjoint(algebra: Arc<LieAlgebra<F>>) -> Self {
        let actions = algebra.ad_basis();
        let dim = algebra.dim();
        LieModule {
            algebra,
            actions,
            dim,
        }
    }

    /// The coadjoint module: `x` acts on `ξ` by `−(ad x)ᵀ ξ`.
    pub fn coadjoint(algebra: Arc<LieAlgebra<F>>) -> Self {
        Self::adjoint(algebra).dual()
    }

    /// Zero action on `F^n`.
    pub fn trivial(algebra: Arc<LieAlgebra<F>>, n: usize) -> Self {
        let actions = vec![Matrix::zeros(n, n); algebra.dim()];
        LieModule {
            algebra,
            actions,
            dim: n,
        }
    }

    /// Dual module with actions `−a(Yᵢ)ᵀ`.
    pub fn dual(&self) -> Self {
        let actions: Vec<Matrix<F>> = self
            .actions
            .iter()
            .map(|a| a.transpose().map(|x| -x.clone()))
            .collect();
        LieModule {
            algebra: self.algebra.clone(),
            actions,
            dim: self.dim,
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra<F>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    /// `a(x) = Σ xᵢ a(Yᵢ)`.
    pub fn action_of(&self, x: &[F]) -> Result<Matrix<F>, LieError> {
        check_len(x, self.algebra.dim())?;
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (xi, a) in x.iter().zip(&self.actions) {
            if !xi.is_zero() {
                out = out.try_add(&a.scale(xi))?;
            }
        }
        Ok(out)
    }

    /// The evaluation map `x ↦ a(x)v` as a `dim V × dim g` matrix.
    pub fn evaluation_matrix(&self, v: &[F]) -> Result<Matrix<F>, LieError> {
        check_len(v, self.dim)?;
        let cols = self
            .actions
            .iter()
            .map(|a| a.try_mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_columns(self.dim, &cols)?)
    }
}

/// The semidirect sum `g ⋉ V` with bracket
/// `[(X₁,v₁),(X₂,v₂)] = ([X₁,X₂], a(X₁)v₂ − a(X₂)v₁)`.
///
/// Basis: the basis of `g` followed by `V₁, …, Vₙ`.
pub fn semidirect_sum<F: LieField>(module: &LieModule<F>) -> Result<LieAlgebra<F>, LieError> {
    let g = module.algebra();
    let m = g.dim();
    let n = module.dim();
    let d = m + n;
    let mut structure = vec![F::zero(); d * d * d];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                structure[(i * d + j) * d + k] = g.c(i, j, k).clone();
            }
        }
        for j in 0..n {
            for k in 0..n {
                let a = module.actions()[i][(k, j)].clone();
                structure[(i * d + m + j) * d + m + k] = a.clone();
                structure[((m + j) * d + i) * d + m + k] = -a;
            }
        }
    }
    let mut names = g.names().to_vec();
    for j in 0..n {
        let mut name = format!("V{}", j + 1);
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
    }
    LieAlgebra::from_tensor(names, structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::{int, Rat};
    use crate::lie::corpus;

    fn q(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn scalar_dual() {
        let l = Arc::new(LieAlgebra::<Rat>::abelian(vec!["Y1".into()]));
        let m = LieModule::new(l, vec![q(&[&[3]])]).unwrap();
        assert_eq!(m.dual().actions()[0], q(&[&[-3]]));
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn line_acting_on_line_is_axb() {
        let l = Arc::new(LieAlgebra::<Rat>::abelian(vec!["Y1".into()]));
        let m = LieModule::new(l, vec![q(&[&[1]])]).unwrap();
        let s = semidirect_sum(&m).unwrap();
        assert_eq!(s.structure(), corpus::ax_plus_b().structure());
    }

    #[test]
    fn coadjoint_of_heisenberg() {
        let h = Arc::new(corpus::heisenberg());
        let co = LieModule::coadjoint(h.clone());
        // (Y1·ξ)(Y2) = −ξ([Y1,Y2]) = −ξ3
        assert_eq!(co.actions()[0], q(&[&[0, 0, 0], &[0, 0, -1], &[0, 0, 0]]));
        let check = LieModule::new(h, co.actions().to_vec()).unwrap();
        assert_eq!(check, co);
    }

    #[test]
    fn representation_law_is_enforced() {
        let axb = Arc::new(corpus::ax_plus_b());
        let bad = LieModule::new(axb, vec![q(&[&[1, 0], &[0, 0]]), q(&[&[1, 0], &[0, 1]])]);
        assert_eq!(bad, Err(LieError::RepresentationLaw { i: 0, j: 1 }));
    }

    #[test]
    fn semidirect_with_tautological_module() {
        let m = corpus::axb_tautological();
        let s = semidirect_sum(&m).unwrap();
        assert_eq!(s.dim(), 4);
        let series = s.structure_series().unwrap();
        assert!(series.is_solvable);
        assert!(!series.is_nilpotent);
        // [Y1, V1] = V1/2, [Y2, V2] = V1
        assert_eq!(s.c(0, 2, 2), &crate::exact_la::rat(1, 2));
        assert_eq!(s.c(1, 3, 2), &int(1));
        assert_eq!(s.c(3, 1, 2), &int(-1));
    }

    #[test]
    fn zero_action_gives_direct_sum() {
        let h = Arc::new(corpus::heisenberg());
        let s = semidirect_sum(&LieModule::trivial(h.clone(), 2)).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(s.center().unwrap().dim(), 3);
        assert_eq!(s.c(0, 1, 2), h.c(0, 1, 2));
    }
}
