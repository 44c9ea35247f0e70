//! Quantum channels, general linear maps on matrices, and instruments.
//!
//! A [`Channel`] is a completely positive map held in Kraus form; the Kraus
//! list is the source of truth and the Choi operator is derived from it. A
//! [`Superoperator`] is an arbitrary linear map in transfer-matrix form
//! (column stacking, `vec(X)[i + j*d] = X[i][j]`), used for differences of
//! channels and for matrix exponentials of generators.
//!
//! Choi convention, fixed crate-wide: `J(Phi) = sum_ij E_ij (x) Phi(E_ij)`,
//! unnormalized, input factor first. A trace-preserving map has
//! `Tr J = dim_in`.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, hermitian_eig, re, ComplexMatrix, C64};

/// Tolerance for accepting an operator as an orthogonal projection.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Negative Choi eigenvalues above this are treated as rounding when
/// converting a transfer matrix back to Kraus form.
pub const KRAUS_CLAMP: f64 = 1e-8;

/// Completely positive map C^{dim_in x dim_in} -> C^{dim_out x dim_out}.
#[derive(Clone, Debug)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    /// Builds a CP map from a nonempty list of equally shaped Kraus operators.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("Kraus list must not be empty".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::dims(
                    format!("{dim_out}x{dim_in}"),
                    format!("{}x{}", k.rows(), k.cols()),
                ));
            }
        }
        Ok(Self { dim_in, dim_out, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// rho -> U rho U^dag
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        u.require_square()?;
        Self::new(vec![u])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// sum_k K rho K^dag
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(Error::dims(
                format!("{0}x{0}", self.dim_in),
                format!("{}x{}", rho.rows(), rho.cols()),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.try_add(&k.matmul(rho)?.matmul(&k.adjoint())?)?;
        }
        Ok(out)
    }

    /// sum_k K^dag K
    pub fn kraus_sum(&self) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.dim_in, self.dim_in), |acc, k| {
                &acc + &(&k.adjoint() * k)
            })
    }

    /// Max entrywise deviation of sum K^dag K from the identity.
    pub fn tp_residual(&self) -> f64 {
        self.kraus_sum().max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    /// Choi operator `sum_ij E_ij (x) Phi(E_ij)`.
    pub fn choi(&self) -> ComplexMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let n = di * dout;
        let mut j = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            // w[i*dout + a] = K[a][i]
            let w: Vec<C64> = (0..n).map(|idx| k[(idx % dout, idx / dout)]).collect();
            for r in 0..n {
                if w[r].re == 0.0 && w[r].im == 0.0 {
                    continue;
                }
                for c in 0..n {
                    j[(r, c)] += w[r] * w[c].conj();
                }
            }
        }
        j
    }

    pub fn superop(&self) -> Superoperator {
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut s = ComplexMatrix::zeros(dout * dout, di * di);
        for k in &self.kraus {
            let kc = k.conj();
            // vec(K X K^dag) = (conj(K) (x) K) vec(X) under column stacking
            s = &s + &kc.kron(k);
        }
        Superoperator {
            dim_in: di,
            dim_out: dout,
            matrix: s,
        }
    }

    /// Multiplies the map by `c >= 0` (Kraus operators scale by sqrt(c)).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be >= 0, got {c}")));
        }
        let s = c.sqrt();
        Ok(Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.iter().map(|k| k.scale_real(s)).collect(),
        })
    }

    /// CPTP diagnostics with a single tolerance for both conditions.
    pub fn is_cptp(&self, tol: f64) -> CptpReport {
        let min_choi_eigenvalue = min_eig_or_neg_inf(&self.choi());
        CptpReport::new(min_choi_eigenvalue, self.tp_residual(), tol)
    }

    /// Converts a transfer matrix back into Kraus form through the Choi
    /// eigendecomposition. Eigenvalues in `[-KRAUS_CLAMP, 0]` are dropped;
    /// anything more negative is reported as a CP violation.
    pub fn from_superop(s: &Superoperator) -> Result<Self> {
        let choi = s.choi();
        let eig = hermitian_eig(&choi)?;
        let (di, dout) = (s.dim_in, s.dim_out);
        if eig.min() < -KRAUS_CLAMP {
            return Err(Error::NotCompletelyPositive { min_eig: eig.min() });
        }
        let cutoff = 1e-15 * eig.max().max(1.0);
        let mut kraus = Vec::new();
        for (idx, &lam) in eig.values.iter().enumerate() {
            if lam <= cutoff {
                continue;
            }
            let sl = lam.sqrt();
            kraus.push(ComplexMatrix::from_fn(dout, di, |a, i| eig.vectors[(i * dout + a, idx)] * sl));
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(dout, di));
        }
        Self::new(kraus)
    }

    /// n-fold serial composition.
    pub fn power(&self, n: usize) -> Result<Superoperator> {
        self.superop().power(n)
    }
}

fn min_eig_or_neg_inf(m: &ComplexMatrix) -> f64 {
    hermitian_eig(m).map(|e| e.min()).unwrap_or(f64::NEG_INFINITY)
}

/// Structured result of a CPTP check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    pub min_choi_eigenvalue: f64,
    pub tp_residual: f64,
    pub completely_positive: bool,
    pub trace_preserving: bool,
}

impl CptpReport {
    fn new(min_choi_eigenvalue: f64, tp_residual: f64, tol: f64) -> Self {
        Self {
            min_choi_eigenvalue,
            tp_residual,
            completely_positive: min_choi_eigenvalue >= -tol,
            trace_preserving: tp_residual <= tol,
        }
    }

    pub fn is_cptp(&self) -> bool {
        self.completely_positive && self.trace_preserving
    }
}

/// `outer` after `inner`: Kraus operators are all products K_outer K_inner.
pub fn compose_serial(outer: &Channel, inner: &Channel) -> Result<Channel> {
    if outer.dim_in != inner.dim_out {
        return Err(Error::dims(outer.dim_in, inner.dim_out));
    }
    let mut kraus = Vec::with_capacity(outer.kraus.len() * inner.kraus.len());
    for ko in &outer.kraus {
        for ki in &inner.kraus {
            kraus.push(ko.matmul(ki)?);
        }
    }
    Channel::new(kraus)
}

/// Tensor product map: Kraus operators are all K_A (x) K_B.
pub fn compose_parallel(a: &Channel, b: &Channel) -> Channel {
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for ka in &a.kraus {
        for kb in &b.kraus {
            kraus.push(ka.kron(kb));
        }
    }
    Channel {
        dim_in: a.dim_in * b.dim_in,
        dim_out: a.dim_out * b.dim_out,
        kraus,
    }
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParameter("dimension must be positive".into()))
    } else {
        Ok(())
    }
}

/// rho -> (1 - p) rho + p diag(rho) in the computational basis.
pub fn dephasing(p: f64, d: usize) -> Result<Channel> {
    check_unit_interval("dephasing strength p", p)?;
    check_dim(d)?;
    let mut kraus = Vec::with_capacity(d + 1);
    if p < 1.0 {
        kraus.push(ComplexMatrix::identity(d).scale_real((1.0 - p).sqrt()));
    }
    if p > 0.0 {
        for i in 0..d {
            kraus.push(ComplexMatrix::unit(d, d, i, i).scale_real(p.sqrt()));
        }
    }
    Channel::new(kraus)
}

/// rho -> (1 - lambda) rho + lambda Tr[rho] I/d.
pub fn depolarizing(lambda: f64, d: usize) -> Result<Channel> {
    check_unit_interval("depolarizing strength lambda", lambda)?;
    check_dim(d)?;
    let mut kraus = Vec::with_capacity(d * d + 1);
    if lambda < 1.0 {
        kraus.push(ComplexMatrix::identity(d).scale_real((1.0 - lambda).sqrt()));
    }
    if lambda > 0.0 {
        let w = (lambda / d as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                kraus.push(ComplexMatrix::unit(d, d, i, j).scale_real(w));
            }
        }
    }
    Channel::new(kraus)
}

/// The rank-one replacement map rho -> Tr[rho] tau.
pub fn replacement(tau: &ComplexMatrix) -> Result<Channel> {
    let d = tau.require_square()?;
    let eig = hermitian_eig(tau)?;
    if eig.min() < -1e-12 {
        return Err(Error::InvalidParameter(format!(
            "replacement state must be positive semidefinite (min eigenvalue {:e})",
            eig.min()
        )));
    }
    if (tau.trace().re - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter("replacement state must have unit trace".into()));
    }
    let mut kraus = Vec::new();
    for (k, &mu) in eig.values.iter().enumerate() {
        if mu <= 1e-15 {
            continue;
        }
        let v = eig.vectors.column(k);
        for j in 0..d {
            kraus.push(ComplexMatrix::from_fn(d, d, |a, i| if i == j { v[a] * mu.sqrt() } else { re(0.0) }));
        }
    }
    Channel::new(kraus)
}

/// Two-qubit partial ZZ coupling exp(-i (gamma/2) Z (x) Z).
pub fn zz_coupling(gamma: f64) -> Channel {
    let m = C64::from_polar(1.0, -gamma / 2.0);
    let p = C64::from_polar(1.0, gamma / 2.0);
    Channel::unitary(ComplexMatrix::diag(&[m, p, p, m])).expect("square")
}

/// SWAP on C^d (x) C^d.
pub fn swap(d: usize) -> Channel {
    let n = d * d;
    let u = ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            re(1.0)
        } else {
            re(0.0)
        }
    });
    Channel::unitary(u).expect("square")
}

/// Max of |P^2 - P| and |P - P^dag| entrywise.
pub fn projection_defect(p: &ComplexMatrix) -> Result<f64> {
    p.require_square()?;
    let idem = p.matmul(p)?.max_abs_diff(p);
    Ok(idem.max(p.hermitian_deviation()))
}

pub(crate) fn require_projection(p: &ComplexMatrix) -> Result<()> {
    let defect = projection_defect(p)?;
    if defect > PROJECTION_TOL {
        return Err(Error::NotProjection(format!("defect {defect:e}")));
    }
    Ok(())
}

/// Finite family of CP maps, indexed by outcome, summing to a channel.
#[derive(Clone, Debug)]
pub struct Instrument {
    outcomes: Vec<String>,
    elements: Vec<Channel>,
}

impl Instrument {
    pub const TP_TOL: f64 = 1e-10;

    pub fn new(outcomes: Vec<String>, elements: Vec<Channel>) -> Result<Self> {
        if elements.is_empty() || outcomes.len() != elements.len() {
            return Err(Error::InvalidParameter(format!(
                "instrument needs one label per element ({} labels, {} elements)",
                outcomes.len(),
                elements.len()
            )));
        }
        let (di, dout) = (elements[0].dim_in, elements[0].dim_out);
        for e in &elements {
            if e.dim_in != di || e.dim_out != dout {
                return Err(Error::dims(format!("{di}->{dout}"), format!("{}->{}", e.dim_in, e.dim_out)));
            }
        }
        let inst = Self { outcomes, elements };
        let residual = inst.sum_channel().tp_residual();
        if residual > Self::TP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(inst)
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn elements(&self) -> &[Channel] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim_in(&self) -> usize {
        self.elements[0].dim_in
    }

    /// The total channel sum_i Phi_i.
    pub fn sum_channel(&self) -> Channel {
        let kraus = self.elements.iter().flat_map(|e| e.kraus.iter().cloned()).collect();
        Channel::new(kraus).expect("instrument elements share dimensions")
    }

    /// Outcome probabilities Tr[Phi_i(rho)].
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Result<Vec<f64>> {
        self.elements.iter().map(|e| Ok(e.apply(rho)?.trace().re)).collect()
    }

    /// The instrument whose element i is Phi_i after `channel`.
    pub fn after(&self, channel: &Channel) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|e| compose_serial(e, channel))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.outcomes.clone(), elements)
    }
}

/// Lueders instrument rho -> P_i rho P_i for a complete projective family.
pub fn lueders_instrument(projections: &[ComplexMatrix]) -> Result<Instrument> {
    let first = projections
        .first()
        .ok_or_else(|| Error::InvalidParameter("projection family must not be empty".into()))?;
    let d = first.require_square()?;
    let mut total = ComplexMatrix::zeros(d, d);
    for p in projections {
        if p.rows() != d || p.cols() != d {
            return Err(Error::dims(d, p.rows()));
        }
        require_projection(p)?;
        total = &total + p;
    }
    let completeness = total.max_abs_diff(&ComplexMatrix::identity(d));
    if completeness > PROJECTION_TOL {
        return Err(Error::NotProjection(format!(
            "family does not sum to the identity (defect {completeness:e})"
        )));
    }
    let elements = projections
        .iter()
        .map(|p| Channel::new(vec![p.clone()]))
        .collect::<Result<Vec<_>>>()?;
    let outcomes = (0..projections.len()).map(|i| i.to_string()).collect();
    Instrument::new(outcomes, elements)
}

/// Linear map on matrices in transfer-matrix form (column stacking).
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim_in: usize, dim_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim_out * dim_out || matrix.cols() != dim_in * dim_in {
            return Err(Error::dims(
                format!("{}x{}", dim_out * dim_out, dim_in * dim_in),
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        Ok(Self { dim_in, dim_out, matrix })
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        Self {
            dim_in,
            dim_out,
            matrix: ComplexMatrix::zeros(dim_out * dim_out, dim_in * dim_in),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            matrix: ComplexMatrix::identity(dim * dim),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let di = self.dim_in;
        if x.rows() != di || x.cols() != di {
            return Err(Error::dims(format!("{di}x{di}"), format!("{}x{}", x.rows(), x.cols())));
        }
        let v: Vec<C64> = (0..di * di).map(|idx| x[(idx % di, idx / di)]).collect();
        let out = self.matrix.mul_vec(&v)?;
        let d = self.dim_out;
        Ok(ComplexMatrix::from_fn(d, d, |a, b| out[a + b * d]))
    }

    /// Choi operator under the crate convention.
    pub fn choi(&self) -> ComplexMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let n = di * dout;
        ComplexMatrix::from_fn(n, n, |r, c| {
            let (i, a) = (r / dout, r % dout);
            let (j, b) = (c / dout, c % dout);
            self.matrix[(a + b * dout, i + j * di)]
        })
    }

    pub fn from_choi(choi: &ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        let n = dim_in * dim_out;
        if choi.rows() != n || choi.cols() != n {
            return Err(Error::dims(format!("{n}x{n}"), format!("{}x{}", choi.rows(), choi.cols())));
        }
        let matrix = ComplexMatrix::from_fn(dim_out * dim_out, dim_in * dim_in, |r, c| {
            let (a, b) = (r % dim_out, r / dim_out);
            let (i, j) = (c % dim_in, c / dim_in);
            choi[(i * dim_out + a, j * dim_out + b)]
        });
        Ok(Self { dim_in, dim_out, matrix })
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &Superoperator) -> Result<Self> {
        if self.dim_in != inner.dim_out {
            return Err(Error::dims(self.dim_in, inner.dim_out));
        }
        Ok(Self {
            dim_in: inner.dim_in,
            dim_out: self.dim_out,
            matrix: self.matrix.matmul(&inner.matrix)?,
        })
    }

    pub fn try_sub(&self, other: &Superoperator) -> Result<Self> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::dims(
                format!("{}->{}", self.dim_in, self.dim_out),
                format!("{}->{}", other.dim_in, other.dim_out),
            ));
        }
        Ok(Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: self.matrix.try_sub(&other.matrix)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: self.matrix.scale_real(s),
        }
    }

    pub fn power(&self, n: usize) -> Result<Self> {
        if self.dim_in != self.dim_out {
            return Err(Error::dims(self.dim_in, self.dim_out));
        }
        let mut result = Self::identity(self.dim_in);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(result)
    }

    /// Max deviation of Tr_out J from I_in (zero iff trace preserving).
    pub fn tp_residual(&self) -> f64 {
        let j = self.choi();
        let t = linalg::partial_trace(&j, linalg::Subsystem::B, self.dim_in, self.dim_out)
            .expect("Choi dimensions are consistent");
        t.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn is_cptp(&self, tol: f64) -> CptpReport {
        CptpReport::new(min_eig_or_neg_inf(&self.choi()), self.tp_residual(), tol)
    }

    /// Largest entrywise distance between transfer matrices.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

impl From<&Channel> for Superoperator {
    fn from(c: &Channel) -> Self {
        c.superop()
    }
}

/// |0>, |1>, |+>, |+i> as density matrices: the default qubit stencil set.
pub fn qubit_stencils() -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let kets: [[C64; 2]; 4] = [
        [re(1.0), re(0.0)],
        [re(0.0), re(1.0)],
        [re(s), re(s)],
        [re(s), c64(0.0, s)],
    ];
    kets.iter().map(|k| ComplexMatrix::ket_bra(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_thirds() -> ComplexMatrix {
        ComplexMatrix::from_fn(3, 3, |_, _| re(1.0 / 3.0))
    }

    fn omega(d: usize) -> Vec<C64> {
        (0..d * d).map(|idx| if idx / d == idx % d { re(1.0) } else { re(0.0) }).collect()
    }

    #[test]
    fn identity_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random::density_matrix(3, &mut rng);
        assert!(Channel::identity(3).apply(&rho).unwrap().approx_eq(&rho, 0.0));
    }

    #[test]
    fn dephasing_on_uniform_coherence() {
        let out = dephasing(0.2, 3).unwrap().apply(&all_thirds()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 / 3.0 } else { 0.8 / 3.0 };
                assert!((out[(i, j)] - re(expected)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dephasing_endpoints_and_scaling() {
        let rho = all_thirds();
        assert!(dephasing(0.0, 3).unwrap().apply(&rho).unwrap().approx_eq(&rho, 1e-15));
        let diag = dephasing(1.0, 3).unwrap().apply(&rho).unwrap();
        assert!(diag.approx_eq(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0), 1e-15));
        let out = dephasing(0.3, 3).unwrap().apply(&rho).unwrap();
        assert!((out[(0, 2)].re - 0.7 / 3.0).abs() < 1e-15);
        assert!(dephasing(1.2, 3).is_err());
        assert!(dephasing(-0.1, 3).is_err());
    }

    #[test]
    fn depolarizing_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random::density_matrix(2, &mut rng);
        assert!(depolarizing(0.0, 2).unwrap().apply(&rho).unwrap().approx_eq(&rho, 1e-15));
        let full = depolarizing(1.0, 2).unwrap().apply(&rho).unwrap();
        assert!(full.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
        // Bloch vector shrinks by 0.7
        let out = depolarizing(0.3, 2).unwrap().apply(&rho).unwrap();
        for p in [pauli::x(), pauli::y(), pauli::z()] {
            let before = (&p * &rho).trace().re;
            let after = (&p * &out).trace().re;
            assert!((after - 0.7 * before).abs() < 1e-14);
        }
        assert!(depolarizing(1.5, 2).is_err());
    }

    #[test]
    fn choi_of_identity_is_omega_projector() {
        let j = Channel::identity(2).choi();
        let expected = ComplexMatrix::ket_bra(&omega(2));
        assert!(j.approx_eq(&expected, 0.0));
        assert_eq!(j.trace().re, 2.0);
    }

    #[test]
    fn choi_of_completely_depolarizing() {
        let j = depolarizing(1.0, 3).unwrap().choi();
        // direct evaluation: Phi(E_ij) = delta_ij I/3
        let mut expected = ComplexMatrix::zeros(9, 9);
        for i in 0..3 {
            for jj in 0..3 {
                let e = ComplexMatrix::unit(3, 3, i, jj);
                let out = if i == jj { ComplexMatrix::identity(3).scale_real(1.0 / 3.0) } else { ComplexMatrix::zeros(3, 3) };
                expected = &expected + &e.kron(&out);
            }
        }
        assert!(j.approx_eq(&expected, 1e-15));
        assert!(j.approx_eq(&ComplexMatrix::identity(9).scale_real(1.0 / 3.0), 1e-15));
    }

    #[test]
    fn choi_of_dephasing() {
        let p = 0.35;
        let j = dephasing(p, 3).unwrap().choi();
        let mut expected = ComplexMatrix::ket_bra(&omega(3)).scale_real(1.0 - p);
        for i in 0..3 {
            expected[(i * 3 + i, i * 3 + i)] += re(p);
        }
        assert!(j.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn serial_composition_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = random::channel(3, 3, 2, &mut rng);
        let rho = random::density_matrix(3, &mut rng);
        let c = compose_serial(&Channel::identity(3), &phi).unwrap();
        assert!(c.apply(&rho).unwrap().approx_eq(&phi.apply(&rho).unwrap(), 1e-12));

        let (p, q) = (0.2, 0.45);
        let dd = compose_serial(&dephasing(p, 3).unwrap(), &dephasing(q, 3).unwrap()).unwrap();
        let single = dephasing(1.0 - (1.0 - p) * (1.0 - q), 3).unwrap();
        assert!(dd.apply(&rho).unwrap().approx_eq(&single.apply(&rho).unwrap(), 1e-14));

        let u = random::haar_unitary(3, &mut rng);
        let v = random::haar_unitary(3, &mut rng);
        let uv = compose_serial(&Channel::unitary(u.clone()).unwrap(), &Channel::unitary(v.clone()).unwrap()).unwrap();
        let direct = Channel::unitary(&u * &v).unwrap();
        assert!(uv.apply(&rho).unwrap().approx_eq(&direct.apply(&rho).unwrap(), 1e-13));

        assert!(compose_serial(&Channel::identity(2), &Channel::identity(3)).is_err());
    }

    #[test]
    fn parallel_composition_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let id = compose_parallel(&Channel::identity(2), &Channel::identity(3));
        let rho = random::density_matrix(6, &mut rng);
        assert!(id.apply(&rho).unwrap().approx_eq(&rho, 0.0));

        let a = random::channel(2, 2, 3, &mut rng);
        let b = random::channel(3, 3, 2, &mut rng);
        let ra = random::density_matrix(2, &mut rng);
        let rb = random::density_matrix(3, &mut rng);
        let ab = compose_parallel(&a, &b);
        let lhs = ab.apply(&ra.kron(&rb)).unwrap();
        let rhs = a.apply(&ra).unwrap().kron(&b.apply(&rb).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));

        let dd = compose_parallel(&dephasing(0.2, 3).unwrap(), &dephasing(0.5, 3).unwrap());
        assert!(dd.is_cptp(1e-10).is_cptp());
    }

    #[test]
    fn zz_coupling_cases() {
        assert!(zz_coupling(0.0).kraus()[0].approx_eq(&ComplexMatrix::identity(4), 0.0));
        let g = 0.9;
        let zz_ch = zz_coupling(g);
        let k = &zz_ch.kraus()[0];
        let m = C64::from_polar(1.0, -g / 2.0);
        let p = C64::from_polar(1.0, g / 2.0);
        assert!(k.approx_eq(&ComplexMatrix::diag(&[m, p, p, m]), 0.0));
        let zz = pauli::z().kron(&pauli::z()).scale(c64(0.0, -g / 2.0));
        assert!(k.approx_eq(&linalg::matrix_exp(&zz).unwrap(), 1e-14));
        assert!(zz_coupling(g).tp_residual() < 1e-15);
    }

    #[test]
    fn lueders_instrument_cases() {
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let inst = lueders_instrument(&[p0.clone(), p1.clone()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random::density_matrix(2, &mut rng);
        let z_deph = dephasing(1.0, 2).unwrap();
        assert!(inst.sum_channel().apply(&rho).unwrap().approx_eq(&z_deph.apply(&rho).unwrap(), 1e-15));

        let a = 0.8_f64;
        let v = [re((a / 2.0).cos()), re((a / 2.0).sin())];
        let pa = ComplexMatrix::ket_bra(&v);
        let rot = lueders_instrument(&[pa.clone(), &ComplexMatrix::identity(2) - &pa]).unwrap();
        assert!(rot.sum_channel().is_cptp(1e-10).is_cptp());

        let single = lueders_instrument(&[ComplexMatrix::identity(3)]).unwrap();
        assert_eq!(single.len(), 1);
        let r3 = random::density_matrix(3, &mut rng);
        assert!(single.sum_channel().apply(&r3).unwrap().approx_eq(&r3, 0.0));

        assert!(matches!(lueders_instrument(&[p0.clone()]), Err(Error::NotProjection(_))));
        assert!(matches!(
            lueders_instrument(&[p0.scale_real(0.9), p1]),
            Err(Error::NotProjection(_))
        ));
    }

    #[test]
    fn cptp_diagnostics() {
        assert!(dephasing(0.4, 3).unwrap().is_cptp(1e-10).is_cptp());
        let over = Channel::new(vec![ComplexMatrix::identity(2).scale_real(1.1)]).unwrap();
        let rep = over.is_cptp(1e-10);
        assert!(rep.completely_positive && !rep.trace_preserving);
        let diff = dephasing(1.0, 2)
            .unwrap()
            .superop()
            .try_sub(&Channel::identity(2).superop())
            .unwrap();
        let rep = diff.is_cptp(1e-10);
        assert!(!rep.completely_positive);
        assert!(!rep.is_cptp());
    }

    #[test]
    fn superop_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = random::channel(2, 3, 3, &mut rng);
        let s = phi.superop();
        assert!(s.choi().approx_eq(&phi.choi(), 1e-14));
        let x = random::ginibre(2, 2, &mut rng);
        assert!(s.apply(&x).unwrap().approx_eq(&phi.apply(&x).unwrap(), 1e-13));
        let back = Superoperator::from_choi(&s.choi(), 2, 3).unwrap();
        assert!(back.max_abs_diff(&s) == 0.0);
        let rebuilt = Channel::from_superop(&s).unwrap();
        assert!(rebuilt.superop().max_abs_diff(&s) < 1e-13);
    }

    #[test]
    fn replacement_map_and_swap() {
        let tau = ComplexMatrix::diag_real(&[0.7, 0.3]);
        let r = replacement(&tau).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random::density_matrix(2, &mut rng);
        assert!(r.apply(&rho).unwrap().approx_eq(&tau, 1e-15));
        assert!(r.is_cptp(1e-12).is_cptp());
        assert!(replacement(&ComplexMatrix::diag_real(&[0.5, 0.6])).is_err());

        let a = random::density_matrix(2, &mut rng);
        let b = random::density_matrix(2, &mut rng);
        let swapped = swap(2).apply(&a.kron(&b)).unwrap();
        assert!(swapped.approx_eq(&b.kron(&a), 1e-15));
    }

    #[test]
    fn apply_rejects_wrong_dims() {
        assert!(Channel::identity(2).apply(&ComplexMatrix::identity(3)).is_err());
        assert!(Channel::new(vec![]).is_err());
        assert!(Channel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]).is_err());
    }
}
