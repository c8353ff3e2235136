use crate::scalar::{dot, Scalar};

use super::{LinalgError, Matrix};

/// A linear subspace of `T^ambient_dim` given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    /// Keep `basis` as given, after checking lengths and independence.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        check_lengths(ambient_dim, &basis)?;
        let m = Matrix::from_rows(ambient_dim, &basis)?;
        if m.rank() != basis.len() {
            return Err(LinalgError::DependentBasis);
        }
        Ok(Self { ambient_dim, basis })
    }

    /// Span of arbitrary vectors, returned in canonical (reduced echelon) form.
    pub fn span(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<Self, LinalgError> {
        check_lengths(ambient_dim, vectors)?;
        let ech = Matrix::from_rows(ambient_dim, vectors)?.rref();
        let basis = (0..ech.pivots.len()).map(|i| ech.matrix.row(i).to_vec()).collect();
        Ok(Self { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::<T>::identity(ambient_dim).row_vecs(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(self.ambient_dim, &self.basis).expect("basis lengths checked")
    }

    pub fn canonical(&self) -> Self {
        Self::span(self.ambient_dim, &self.basis).expect("basis lengths checked")
    }

    /// Equality of the underlying sets, independent of the chosen bases.
    pub fn same_space(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.canonical().basis == other.canonical().basis
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(self.ambient_dim, &rows)
            .map(|m| m.rank() == self.dim())
            .unwrap_or(false)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

fn check_lengths<T>(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<(), LinalgError> {
    match vectors.iter().find(|v| v.len() != ambient_dim) {
        Some(v) => Err(LinalgError::DimensionMismatch {
            expected: ambient_dim,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

/// A symmetric, strictly positive definite bilinear form given by its Gram
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm<T> {
    gram: Matrix<T>,
}

impl<T: Scalar> BilinearForm<T> {
    /// Positive definiteness is checked through the leading principal minors.
    pub fn new(gram: Matrix<T>) -> Result<Self, LinalgError> {
        if !gram.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        for k in 1..=gram.rows() {
            let minor = Matrix::from_fn(k, k, |i, j| gram[(i, j)].clone());
            if minor.determinant()? <= T::zero() {
                return Err(LinalgError::NotPositiveDefinite);
            }
        }
        Ok(Self { gram })
    }

    pub fn standard(n: usize) -> Self {
        Self {
            gram: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    /// The same form multiplied by a positive scalar.
    pub fn scaled(&self, c: &T) -> Result<Self, LinalgError> {
        if *c <= T::zero() {
            return Err(LinalgError::NotPositiveDefinite);
        }
        Ok(Self {
            gram: self.gram.scale(c),
        })
    }

    pub fn pair(&self, x: &[T], y: &[T]) -> T {
        let gy = self.gram.mul_vec(y).expect("form dimension");
        dot(x, &gy)
    }

    /// The vector `v` with `pair(v, x) = covector · x` for all `x`.
    pub fn dual_of(&self, covector: &[T]) -> Vec<T> {
        let inv = self.gram.inverse().expect("positive definite form is invertible");
        inv.mul_vec(covector).expect("form dimension")
    }

    /// Orthogonal projection of `x` onto `u`.
    pub fn project(&self, x: &[T], u: &Subspace<T>) -> Vec<T> {
        let k = u.dim();
        let n = u.ambient_dim();
        if k == 0 {
            return vec![T::zero(); n];
        }
        let b = u.basis();
        let gram_u = Matrix::from_fn(k, k, |i, j| self.pair(&b[i], &b[j]));
        let rhs: Vec<T> = b.iter().map(|bi| self.pair(bi, x)).collect();
        let coeffs = gram_u
            .inverse()
            .expect("basis of a subspace has nonsingular Gram matrix")
            .mul_vec(&rhs)
            .expect("dimension");
        let mut out = vec![T::zero(); n];
        for (c, bi) in coeffs.iter().zip(b) {
            for (o, x) in out.iter_mut().zip(bi) {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
        out
    }
}

/// The image of `w` under orthogonal projection onto `u`.
pub fn project_subspace<T: Scalar>(
    w: &Subspace<T>,
    u: &Subspace<T>,
    form: &BilinearForm<T>,
) -> Result<Subspace<T>, LinalgError> {
    if w.ambient_dim() != u.ambient_dim() || form.dim() != u.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: u.ambient_dim(),
            found: w.ambient_dim(),
        });
    }
    let images: Vec<Vec<T>> = w.basis().iter().map(|x| form.project(x, u)).collect();
    Subspace::span(u.ambient_dim(), &images)
}

/// Matrix `[λ_i(b_j)]` of functionals (given as covectors) on a basis.
pub fn evaluation_matrix<T: Scalar>(functionals: &[Vec<T>], w: &Subspace<T>) -> Matrix<T> {
    Matrix::from_fn(functionals.len(), w.dim(), |i, j| dot(&functionals[i], &w.basis()[j]))
}

/// Whether the covectors `functionals`, restricted to `w`, are linearly
/// independent.
pub fn restricted_independent<T: Scalar>(functionals: &[Vec<T>], w: &Subspace<T>) -> bool {
    restricted_independent_with_form(functionals, w, &BilinearForm::standard(w.ambient_dim()))
}

/// As [`restricted_independent`]; `form` only enters the projection-route
/// cross-check run by exact debug builds.
pub fn restricted_independent_with_form<T: Scalar>(
    functionals: &[Vec<T>],
    w: &Subspace<T>,
    form: &BilinearForm<T>,
) -> bool {
    let by_rank = evaluation_matrix(functionals, w).rank() == functionals.len();
    if cfg!(debug_assertions) && T::EXACT {
        debug_assert_eq!(
            by_rank,
            independent_by_projection(functionals, w, form),
            "evaluation rank and projection test disagree"
        );
    }
    by_rank
}

/// Independence on `w` decided as `π_U(w) = U`, `U` the span of the form
/// duals, together with independence on the ambient space.
pub fn independent_by_projection<T: Scalar>(
    functionals: &[Vec<T>],
    w: &Subspace<T>,
    form: &BilinearForm<T>,
) -> bool {
    let n = w.ambient_dim();
    let duals: Vec<Vec<T>> = functionals.iter().map(|f| form.dual_of(f)).collect();
    let u = Subspace::span(n, &duals).expect("dual vectors have ambient length");
    if u.dim() != functionals.len() {
        return false;
    }
    project_subspace(w, &u, form)
        .map(|p| p.same_space(&u))
        .unwrap_or(false)
}
