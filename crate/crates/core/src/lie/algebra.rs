use std::collections::HashSet;

use crate::exact_la::{format_gauss, format_rat, Field, GaussRat, LaError, Matrix, Mode, Rat, Scalar};

use super::{LieError, Subspace};

/// Ground field of a Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GroundField {
    /// Real algebra with rational structure constants.
    #[serde(rename = "Q")]
    RealRational,
    /// Complex algebra with Gaussian-rational structure constants.
    #[serde(rename = "Qi")]
    ComplexGaussian,
}

/// Scalars a Lie algebra can be defined over.
pub trait LieField: Field {
    const GROUND: GroundField;
    fn from_scalar(s: &Scalar) -> Result<Self, LaError>;
    fn to_gauss(&self) -> GaussRat;
    fn format(&self) -> String;
}

impl LieField for Rat {
    const GROUND: GroundField = GroundField::RealRational;
    fn from_scalar(s: &Scalar) -> Result<Self, LaError> {
        s.to_rat()
    }
    fn to_gauss(&self) -> GaussRat {
        GaussRat::from_rat(self)
    }
    fn format(&self) -> String {
        format_rat(self)
    }
}

impl LieField for GaussRat {
    const GROUND: GroundField = GroundField::ComplexGaussian;
    fn from_scalar(s: &Scalar) -> Result<Self, LaError> {
        s.to_gauss()
    }
    fn to_gauss(&self) -> GaussRat {
        self.clone()
    }
    fn format(&self) -> String {
        format_gauss(self)
    }
}

/// One nonzero bracket `[Y_i, Y_j] = Σ_k c_k Y_k` as supplied by the user.
#[derive(Debug, Clone)]
pub struct Bracket<F> {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(usize, F)>,
}

/// A finite-dimensional Lie algebra given by structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<F> {
    names: Vec<String>,
    // c[(i * m + j) * m + k] is the Y_k coefficient of [Y_i, Y_j]
    structure: Vec<F>,
}

/// Derived/lower central series, center and the resulting flags.
#[derive(Debug, Clone)]
pub struct StructureSeries<F> {
    pub derived_series: Vec<Subspace<F>>,
    pub lower_central_series: Vec<Subspace<F>>,
    pub center: Subspace<F>,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
}

impl<F: LieField> LieAlgebra<F> {
    /// Builds an algebra from sparse brackets and validates it.
    ///
    /// Each unordered pair may be given once in either orientation; the
    /// antisymmetric partner is filled in. Unlisted pairs bracket to zero.
    pub fn from_brackets(names: Vec<String>, brackets: &[Bracket<F>]) -> Result<Self, LieError> {
        let m = names.len();
        let mut structure = vec![F::zero(); m * m * m];
        let mut seen = HashSet::new();
        for b in brackets {
            for idx in std::iter::once(b.i)
                .chain(std::iter::once(b.j))
                .chain(b.coeffs.iter().map(|c| c.0))
            {
                if idx >= m {
                    return Err(LieError::IndexOutOfRange { index: idx, dim: m });
                }
            }
            let nonzero: Vec<_> = b.coeffs.iter().filter(|(_, c)| !c.is_zero()).collect();
            if b.i == b.j {
                if let Some((k, _)) = nonzero.first() {
                    return Err(LieError::Antisymmetry {
                        i: b.i,
                        j: b.j,
                        k: *k,
                    });
                }
                continue;
            }
            let key = (b.i.min(b.j), b.i.max(b.j));
            if !seen.insert(key) {
                // a second listing must be the exact antisymmetric partner
                for k in 0..m {
                    let given = b
                        .coeffs
                        .iter()
                        .filter(|c| c.0 == k)
                        .fold(F::zero(), |acc, c| acc + &c.1);
                    if structure[(b.i * m + b.j) * m + k] != given {
                        return Err(LieError::Antisymmetry { i: b.i, j: b.j, k });
                    }
                }
                continue;
            }
            for (k, c) in &b.coeffs {
                let slot = &mut structure[(b.i * m + b.j) * m + k];
                *slot = std::mem::replace(slot, F::zero()) + c;
                let anti = &mut structure[(b.j * m + b.i) * m + k];
                *anti = std::mem::replace(anti, F::zero()) - c;
            }
        }
        Self::from_tensor(names, structure)
    }

    /// Validates a dense `m×m×m` tensor (no completion is performed).
    pub fn from_tensor(names: Vec<String>, structure: Vec<F>) -> Result<Self, LieError> {
        let m = names.len();
        if structure.len() != m * m * m {
            return Err(LieError::La(LaError::Dimension {
                expected: m * m * m,
                found: structure.len(),
            }));
        }
        let mut distinct = HashSet::new();
        for n in &names {
            if !distinct.insert(n.as_str()) {
                return Err(LieError::DuplicateBasisName(n.clone()));
            }
        }
        let alg = LieAlgebra { names, structure };
        alg.check_antisymmetry()?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Abelian algebra with the given basis names.
    pub fn abelian(names: Vec<String>) -> Self {
        let m = names.len();
        LieAlgebra {
            names,
            structure: vec![F::zero(); m * m * m],
        }
    }

    fn check_antisymmetry(&self) -> Result<(), LieError> {
        let m = self.dim();
        for i in 0..m {
            for j in i..m {
                for k in 0..m {
                    let a = self.c(i, j, k);
                    let b = self.c(j, i, k);
                    if a.clone() + b != F::zero() {
                        return Err(LieError::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact Jacobi residual of the triple `(i, j, k)`.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Vec<F> {
        let m = self.dim();
        let e = |t: usize| -> Vec<F> {
            let mut v = vec![F::zero(); m];
            v[t] = F::one();
            v
        };
        let (yi, yj, yk) = (e(i), e(j), e(k));
        let a = self.bracket(&yi, &self.bracket(&yj, &yk));
        let b = self.bracket(&yj, &self.bracket(&yk, &yi));
        let c = self.bracket(&yk, &self.bracket(&yi, &yj));
        a.into_iter()
            .zip(b)
            .zip(c)
            .map(|((x, y), z)| x + y + z)
            .collect()
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let m = self.dim();
        // with antisymmetry in place, triples with a repeated index vanish
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    if self.jacobi_residual(i, j, k).iter().any(|x| !x.is_zero()) {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ground_field(&self) -> GroundField {
        F::GROUND
    }

    pub fn mode(&self) -> Mode {
        F::MODE
    }

    /// Structure constant: the `Y_k` coefficient of `[Y_i, Y_j]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &F {
        let m = self.dim();
        &self.structure[(i * m + j) * m + k]
    }

    pub fn structure(&self) -> &[F] {
        &self.structure
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    /// Bracket of coordinate vectors. Panics on a length mismatch; use
    /// [`LieAlgebra::try_bracket`] for unchecked input.
    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.try_bracket(x, y).expect("vector length matches algebra dimension")
    }

    pub fn try_bracket(&self, x: &[F], y: &[F]) -> Result<Vec<F>, LieError> {
        let m = self.dim();
        check_len(x, m)?;
        check_len(y, m)?;
        let mut out = vec![F::zero(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi.clone() * yj;
                let base = (i * m + j) * m;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = &self.structure[base + k];
                    if !c.is_zero() {
                        *slot = std::mem::replace(slot, F::zero()) + w.clone() * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad x` in the basis, so that `(ad x)·y = [x, y]`.
    pub fn ad_matrix(&self, x: &[F]) -> Result<Matrix<F>, LieError> {
        let m = self.dim();
        check_len(x, m)?;
        let mut ad = Matrix::zeros(m, m);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..m {
                for k in 0..m {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        let v = std::mem::replace(&mut ad[(k, j)], F::zero());
                        ad[(k, j)] = v + xi.clone() * c;
                    }
                }
            }
        }
        Ok(ad)
    }

    pub fn ad_basis(&self) -> Vec<Matrix<F>> {
        (0..self.dim())
            .map(|i| self.ad_matrix(&self.basis_vector(i)).expect("basis vector has the right length"))
            .collect()
    }

    /// `[A, B]` as a subspace.
    pub fn bracket_subspaces(&self, a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>, LieError> {
        let mut vs = Vec::new();
        for u in a.basis() {
            for w in b.basis() {
                let v = self.bracket(u, w);
                if v.iter().any(|x| !x.is_zero()) {
                    vs.push(v);
                }
            }
        }
        Ok(Subspace::span(self.dim(), &vs)?)
    }

    pub fn full_space(&self) -> Subspace<F> {
        Subspace::full(self.dim())
    }

    pub fn derived_subalgebra(&self) -> Subspace<F> {
        let g = self.full_space();
        self.bracket_subspaces(&g, &g)
            .expect("subspaces share the ambient dimension")
    }

    pub fn center(&self) -> Result<Subspace<F>, LieError> {
        let m = self.dim();
        if m == 0 {
            return Ok(Subspace::zero(0));
        }
        let stacked = Matrix::stack(&self.ad_basis())?;
        // x central ⇔ [Y_i, x] = 0 for all i ⇔ (ad Y_i) x = 0
        let (_, ker) = stacked.rank_kernel()?;
        Ok(Subspace::span(m, &ker)?)
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> bool {
        s.basis()
            .iter()
            .all(|u| s.basis().iter().all(|w| s.contains(&self.bracket(u, w))))
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        (0..self.dim()).all(|i| {
            let y = self.basis_vector(i);
            s.basis().iter().all(|w| s.contains(&self.bracket(&y, w)))
        })
    }

    pub fn structure_series(&self) -> Result<StructureSeries<F>, LieError> {
        let g = self.full_space();
        let derived_series = descending_chain(g.clone(), |s| self.bracket_subspaces(s, s))?;
        let lower_central_series = descending_chain(g.clone(), |s| self.bracket_subspaces(&g, s))?;
        let is_solvable = derived_series.last().is_some_and(Subspace::is_zero);
        let is_nilpotent = lower_central_series.last().is_some_and(Subspace::is_zero);
        Ok(StructureSeries {
            derived_series,
            lower_central_series,
            center: self.center()?,
            is_solvable,
            is_nilpotent,
        })
    }

    pub fn is_solvable(&self) -> bool {
        self.structure_series().map(|s| s.is_solvable).unwrap_or(false)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.structure_series().map(|s| s.is_nilpotent).unwrap_or(false)
    }

    /// Ascending central series `z₁ = center ⊂ z₂ ⊂ …`, ending when it
    /// stabilizes (at `g` for nilpotent algebras).
    pub fn upper_central_series(&self) -> Result<Vec<Subspace<F>>, LieError> {
        let m = self.dim();
        let mut chain = vec![Subspace::zero(m)];
        loop {
            let prev = chain.last().expect("chain starts non-empty");
            let next = self.preimage_of_center_mod(prev)?;
            if next.dim() == prev.dim() {
                break;
            }
            chain.push(next);
        }
        Ok(chain)
    }

    /// `{x : [g, x] ⊆ s}` for an ideal `s`.
    fn preimage_of_center_mod(&self, s: &Subspace<F>) -> Result<Subspace<F>, LieError> {
        let m = self.dim();
        // express membership modulo s via a complement projection: stack
        // (ad Y_i) followed by a matrix whose kernel is s
        let annihilator = {
            let basis = s.basis_matrix();
            let (_, ker) = basis.transpose().rank_kernel()?;
            ker
        };
        if annihilator.is_empty() {
            return Ok(Subspace::full(m));
        }
        let ann = Matrix::from_rows(annihilator)?;
        let blocks: Vec<Matrix<F>> = self
            .ad_basis()
            .iter()
            .map(|ad| ann.try_mul(ad))
            .collect::<Result<_, _>>()?;
        let (_, ker) = Matrix::stack(&blocks)?.rank_kernel()?;
        Ok(Subspace::span(m, &ker)?)
    }
}

/// Lie algebra spanned by a set of square matrices under the commutator.
///
/// Returns the algebra and the matrices of its basis, which form a
/// faithful representation of it.
pub fn matrix_lie_algebra<F: LieField>(
    generators: &[Matrix<F>],
    prefix: &str,
) -> Result<(LieAlgebra<F>, Vec<Matrix<F>>), LieError> {
    let n = generators.first().map_or(0, Matrix::rows);
    let flat = |a: &Matrix<F>| a.entries().to_vec();
    let mut basis: Vec<Matrix<F>> = Vec::new();
    let mut span = Subspace::<F>::zero(n * n);
    let push = |a: Matrix<F>, basis: &mut Vec<Matrix<F>>, span: &mut Subspace<F>| -> Result<bool, LieError> {
        let v = flat(&a);
        if span.contains(&v) {
            return Ok(false);
        }
        let mut vs = span.basis().to_vec();
        vs.push(v);
        *span = Subspace::span(n * n, &vs)?;
        basis.push(a);
        Ok(true)
    };
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(LieError::La(LaError::Shape {
                left: (n, n),
                right: (g.rows(), g.cols()),
            }));
        }
        push(g.clone(), &mut basis, &mut span)?;
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let c = basis[j].commutator(&basis[i])?;
            push(c, &mut basis, &mut span)?;
        }
        i += 1;
    }
    let m = basis.len();
    let cols: Vec<Vec<F>> = basis.iter().map(flat).collect();
    let coords = Matrix::from_columns(n * n, &cols)?;
    let mut structure = vec![F::zero(); m * m * m];
    for a in 0..m {
        for b in 0..m {
            let c = basis[a].commutator(&basis[b])?;
            let x = coords
                .solve(&flat(&c))?
                .expect("commutator lies in the closed span");
            for (k, v) in x.into_iter().enumerate() {
                structure[(a * m + b) * m + k] = v;
            }
        }
    }
    let names = (0..m).map(|k| format!("{prefix}{}", k + 1)).collect();
    Ok((LieAlgebra::from_tensor(names, structure)?, basis))
}

fn descending_chain<F: Field>(
    start: Subspace<F>,
    mut step: impl FnMut(&Subspace<F>) -> Result<Subspace<F>, LieError>,
) -> Result<Vec<Subspace<F>>, LieError> {
    let mut chain = vec![start];
    loop {
        let last = chain.last().expect("chain starts non-empty");
        let next = step(last)?;
        if next.dim() == last.dim() {
            break;
        }
        let done = next.is_zero();
        chain.push(next);
        if done {
            break;
        }
    }
    Ok(chain)
}

pub(crate) fn check_len<F>(x: &[F], m: usize) -> Result<(), LieError> {
    if x.len() != m {
        return Err(LieError::La(LaError::Dimension {
            expected: m,
            found: x.len(),
        }));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::{int, rat};
    use crate::lie::corpus;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn names(m: usize) -> Vec<String> {
        (1..=m).map(|k| format!("Y{k}")).collect()
    }

    #[test]
    fn heisenberg_and_axb_validate() {
        let h = corpus::heisenberg();
        assert_eq!(h.bracket(&v(&[0, 1, 0]), &v(&[1, 0, 0])), v(&[0, 0, -1]));
        assert_eq!(corpus::ax_plus_b().c(1, 0, 1), &int(-1));
    }

    #[test]
    fn jacobi_failure_names_the_triple() {
        let bad = LieAlgebra::from_brackets(
            names(3),
            &[
                Bracket { i: 0, j: 1, coeffs: vec![(2, int(1))] },
                Bracket { i: 0, j: 2, coeffs: vec![(0, int(1))] },
            ],
        );
        assert_eq!(bad, Err(LieError::Jacobi { i: 0, j: 1, k: 2 }));
        // the residual on (1,2,3) is Y3 itself
        let raw = LieAlgebra {
            names: names(3),
            structure: {
                let mut s = vec![int(0); 27];
                s[2] = int(1);
                s[3 * 3 + 2] = int(-1);
                s[2 * 3] = int(1);
                s[6 * 3] = int(-1);
                s
            },
        };
        assert_eq!(raw.jacobi_residual(0, 1, 2), v(&[0, 0, 1]));
    }

    #[test]
    fn bracket_input_errors() {
        let conflict = LieAlgebra::from_brackets(
            names(2),
            &[
                Bracket { i: 0, j: 1, coeffs: vec![(1, int(1))] },
                Bracket { i: 1, j: 0, coeffs: vec![(1, int(1))] },
            ],
        );
        assert!(matches!(conflict, Err(LieError::Antisymmetry { .. })));
        let partner = LieAlgebra::from_brackets(
            names(2),
            &[
                Bracket { i: 0, j: 1, coeffs: vec![(1, int(1))] },
                Bracket { i: 1, j: 0, coeffs: vec![(1, int(-1))] },
            ],
        )
        .unwrap();
        assert_eq!(partner, corpus::ax_plus_b());
        let diag = LieAlgebra::from_brackets(names(2), &[Bracket { i: 1, j: 1, coeffs: vec![(0, int(1))] }]);
        assert!(matches!(diag, Err(LieError::Antisymmetry { .. })));
        let dup = LieAlgebra::<Rat>::from_brackets(vec!["A".into(), "A".into()], &[]);
        assert_eq!(dup, Err(LieError::DuplicateBasisName("A".into())));
        let mut s = vec![int(0); 8];
        s[1] = int(1);
        assert!(matches!(
            LieAlgebra::from_tensor(names(2), s),
            Err(LieError::Antisymmetry { .. })
        ));
    }

    #[test]
    fn ad_matrices() {
        let h = corpus::heisenberg();
        let ad1 = h.ad_matrix(&v(&[1, 0, 0])).unwrap();
        let mut expect = Matrix::zeros(3, 3);
        expect[(2, 1)] = int(1);
        assert_eq!(ad1, expect);
        assert!(h.ad_matrix(&v(&[0, 0, 0])).unwrap().is_zero());
        let axb = corpus::ax_plus_b();
        let ad = axb.ad_matrix(&v(&[1, 0])).unwrap();
        assert_eq!(ad, Matrix::diagonal(&[int(0), int(1)]));
        assert!(axb.ad_matrix(&v(&[1])).is_err());
    }

    #[test]
    fn series() {
        let h = corpus::heisenberg().structure_series().unwrap();
        assert!(h.is_nilpotent && h.is_solvable);
        assert_eq!(h.center, Subspace::span(3, &[v(&[0, 0, 1])]).unwrap());

        let a = corpus::ax_plus_b().structure_series().unwrap();
        assert!(a.is_solvable && !a.is_nilpotent);
        assert!(a.center.is_zero());
        assert_eq!(a.lower_central_series.last().unwrap().dim(), 1);

        let ab = LieAlgebra::<Rat>::abelian(names(2)).structure_series().unwrap();
        assert!(ab.is_nilpotent);
        assert_eq!(ab.center.dim(), 2);

        let sl2 = corpus::sl2_split().structure_series().unwrap();
        assert!(!sl2.is_solvable);
    }

    #[test]
    fn upper_central_series_of_filiform() {
        let n4 = corpus::filiform4();
        let ucs = n4.upper_central_series().unwrap();
        let dims: Vec<usize> = ucs.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![0, 1, 2, 4]);
        assert!(ucs.iter().all(|s| n4.is_ideal(s)));
    }

    #[test]
    fn matrix_closure_of_upper_triangular() {
        let mut e12 = Matrix::<Rat>::zeros(2, 2);
        e12[(0, 1)] = int(1);
        let h = Matrix::diagonal(&[rat(1, 2), rat(-1, 2)]);
        let (l, basis) = matrix_lie_algebra(&[h, e12], "Y").unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(l, corpus::ax_plus_b());
    }
}
