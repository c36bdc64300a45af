//! Flat 𝕋ⁿ-equivariant real spectral triples over A(𝕋^{n+m}_θ) and their
//! verification suite.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, ThetaMatrix};
use crate::clifford::{build_gammas, kron, pauli, vertical_grading, CMatrix, GammaSet, KRSigns};
use crate::error::{Error, Result};
use crate::gns::{derivation_operator, represent, tomita_j, LinearOperator, TruncatedSpace};
use crate::report::VerificationReport;
use crate::sampling::{rng, Samples};

/// Spinor module carrying the Clifford action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinorModule {
    /// The irreducible module S.
    #[default]
    Irreducible,
    /// S ⊗ ℂ² with J ⊗ c.c. and fibre grading Γ ⊗ σ², which flips the sign of JΓ.
    Doubled,
}

/// Deliberate defects used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Corruption {
    /// J built from C = 1 instead of the charge conjugation.
    DropChargeConjugation,
    /// D uses γ^gamma in front of δ_slot (0-based) instead of γ^slot.
    SlotGamma { slot: usize, gamma: usize },
}

#[derive(Clone, Debug)]
pub struct TripleData {
    pub theta: Arc<ThetaMatrix>,
    pub algebra: Vec<AlgebraElement>,
    pub space: TruncatedSpace,
    pub gammas: GammaSet,
    pub module: SpinorModule,
    pub corruption: Option<Corruption>,
    pub d: LinearOperator,
    pub j: LinearOperator,
    pub gamma: Option<LinearOperator>,
    pub deltas: Vec<LinearOperator>,
    pub n: usize,
    pub m: usize,
    pub kr_dim: usize,
}

fn lift(module: SpinorModule, m: &CMatrix) -> CMatrix {
    match module {
        SpinorModule::Irreducible => m.clone(),
        SpinorModule::Doubled => kron(m, &CMatrix::identity(2, 2)),
    }
}

fn charge_conj_on(
    module: SpinorModule,
    corruption: Option<Corruption>,
    gammas: &GammaSet,
) -> CMatrix {
    match corruption {
        Some(Corruption::DropChargeConjugation) => {
            let sd = gammas.spinor_dim()
                * if module == SpinorModule::Doubled {
                    2
                } else {
                    1
                };
            CMatrix::identity(sd, sd)
        }
        _ => lift(module, &gammas.charge_conj),
    }
}

pub fn build_flat_triple(
    theta: &Arc<ThetaMatrix>,
    n: usize,
    m: usize,
    cutoff: u32,
) -> Result<TripleData> {
    build_flat_triple_with(theta, n, m, cutoff, SpinorModule::Irreducible, None)
}

/// D = Σ γʲδⱼ on L²(𝕋ᵏ_θ) ⊗ S, with J from the Tomita involution and the
/// charge conjugation, and γ the chirality when n+m is even.
pub fn build_flat_triple_with(
    theta: &Arc<ThetaMatrix>,
    n: usize,
    m: usize,
    cutoff: u32,
    module: SpinorModule,
    corruption: Option<Corruption>,
) -> Result<TripleData> {
    let k = n + m;
    if theta.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: theta.dim(),
        });
    }
    let gammas = build_gammas(k)?;
    let mult = if module == SpinorModule::Doubled {
        2
    } else {
        1
    };
    let space = TruncatedSpace::new(k, cutoff, gammas.spinor_dim() * mult)?;

    let mut slot_gamma: Vec<CMatrix> = gammas.matrices.iter().map(|g| lift(module, g)).collect();
    if let Some(Corruption::SlotGamma { slot, gamma }) = corruption {
        if slot >= k || gamma >= k {
            return Err(Error::IndexOutOfRange {
                index: slot.max(gamma),
                bound: k,
            });
        }
        slot_gamma[slot] = lift(module, &gammas.matrices[gamma]);
    }
    let d = LinearOperator::lattice_local(space, |p| {
        let mut block = CMatrix::zeros(space.spinor_dim, space.spinor_dim);
        for (j, g) in slot_gamma.iter().enumerate() {
            if p[j] != 0 {
                block += g * Complex64::new(p[j] as f64, 0.0);
            }
        }
        Some(block)
    })?;

    let c = charge_conj_on(module, corruption, &gammas);
    let j = tomita_j(&space, theta, &c)?;
    let gamma = match &gammas.chirality {
        Some(chi) => Some(LinearOperator::spinor_constant(space, &lift(module, chi))?),
        None => None,
    };
    let deltas = (0..k)
        .map(|i| derivation_operator(i, &space))
        .collect::<Result<Vec<_>>>()?;
    let algebra = (0..k)
        .map(|i| AlgebraElement::generator(theta, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(TripleData {
        theta: Arc::clone(theta),
        algebra,
        space,
        gammas,
        module,
        corruption,
        d,
        j,
        gamma,
        deltas,
        n,
        m,
        kr_dim: k,
    })
}

impl TripleData {
    pub fn signs(&self) -> KRSigns {
        self.gammas.signs
    }

    /// Same construction at another cutoff.
    pub fn at_cutoff(&self, cutoff: u32) -> Result<TripleData> {
        build_flat_triple_with(
            &self.theta,
            self.n,
            self.m,
            cutoff,
            self.module,
            self.corruption,
        )
    }

    /// Copy of the triple with a different Dirac operator.
    pub fn with_dirac(&self, d: LinearOperator) -> Result<TripleData> {
        if *d.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(TripleData { d, ..self.clone() })
    }

    /// γʲ acting on the spinor module (0-based j).
    pub fn spinor_gamma(&self, j: usize) -> CMatrix {
        lift(self.module, &self.gammas.matrices[j])
    }

    /// Spinor factor C of J = C ⊗ (Tomita involution).
    pub fn spinor_charge_conj(&self) -> CMatrix {
        charge_conj_on(self.module, self.corruption, &self.gammas)
    }

    pub fn gamma_op(&self, j: usize) -> Result<LinearOperator> {
        LinearOperator::spinor_constant(self.space, &self.spinor_gamma(j))
    }

    /// sign · phase · γ¹⋯γⁿ on the module (⊗ σ² for the doubled module).
    pub fn fibre_grading(&self, sign: f64) -> Result<CMatrix> {
        let g = vertical_grading(&self.gammas, self.n)? * Complex64::new(sign, 0.0);
        Ok(match self.module {
            SpinorModule::Irreducible => g,
            SpinorModule::Doubled => kron(&g, &pauli(2)),
        })
    }

    pub fn pi(&self, a: &AlgebraElement) -> Result<LinearOperator> {
        represent(a, &self.space)
    }

    /// J π(b)* J⁻¹, the right action of b.
    pub fn opposite(&self, b: &AlgebraElement) -> Result<LinearOperator> {
        self.pi(b)?.adjoint().conjugate_by(&self.j)
    }

    /// Sign s with JΓ = sΓJ required for projectability.
    pub fn required_j_gamma_sign(&self) -> f64 {
        if self.kr_dim % 2 == 1 && self.m.is_multiple_of(4) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Boundedness surrogate: sup over interior basis vectors of ‖[D, π(a)]v‖ must
/// not depend on the cutoff.
fn commutator_column_sup(t: &TripleData, a: &AlgebraElement) -> Result<f64> {
    let c = LinearOperator::commutator(&t.d, &t.pi(a)?)?;
    Ok(c.interior_column_sup(a.degree()))
}

/// Runs every structural check of an equivariant real spectral triple on the
/// interior of the truncated space.
pub fn verify_equivariant_real_triple(
    t: &TripleData,
    samples: &Samples,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(tolerance);
    let signs = t.signs();
    let id = LinearOperator::identity(t.space);

    r.record(
        "D selfadjoint",
        "Dirac operator",
        t.d.selfadjoint_deviation(),
        0,
    );

    let wider = t.at_cutoff(t.space.cutoff + 2)?;
    for (i, (a, _)) in samples.pairs.iter().enumerate() {
        let here = commutator_column_sup(t, a)?;
        let there = commutator_column_sup(&wider, a)?;
        r.record(
            format!("bounded [D,a] #{i}"),
            "bounded commutators (cutoff-stable norm)",
            (here - there).abs(),
            a.degree(),
        );
    }

    for (i, (a, b)) in samples.pairs.iter().enumerate() {
        let pa = t.pi(a)?;
        let jb = t.opposite(b)?;
        let radius = a.degree() + b.degree();
        let comm = LinearOperator::commutator(&pa, &jb)?;
        r.record(
            format!("commutant #{i}"),
            "J maps A into its commutant",
            comm.interior_norm(radius),
            radius,
        );
        let da = LinearOperator::commutator(&t.d, &pa)?;
        let fo = LinearOperator::commutator(&da, &jb)?;
        r.record(
            format!("first-order #{i}"),
            "first-order condition",
            fo.interior_norm(radius),
            radius,
        );
    }

    for (j, delta) in t.deltas.iter().enumerate() {
        for (i, (a, _)) in samples.pairs.iter().enumerate() {
            let pa = t.pi(a)?;
            let lhs = LinearOperator::commutator(delta, &pa)?;
            let rhs = t.pi(&a.derivation(j)?)?;
            r.record(
                format!("equivariance Leibniz delta_{} #{i}", j + 1),
                "delta(pi(a)psi) = pi(delta a)psi + pi(a) delta psi",
                lhs.interior_deviation(&rhs, Some(a.degree()))?,
                a.degree(),
            );
        }
        let dj = LinearOperator::commutator(delta, &t.d)?;
        r.record(
            format!("[delta_{}, D] = 0", j + 1),
            "equivariance",
            dj.interior_norm(0),
            0,
        );
        let anti = delta.compose(&t.j)?.try_add(&t.j.compose(delta)?)?;
        r.record(
            format!("delta_{} J + J delta_{} = 0", j + 1, j + 1),
            "equivariance",
            anti.interior_norm(0),
            0,
        );
        if let Some(g) = &t.gamma {
            let c = LinearOperator::commutator(delta, g)?;
            r.record(
                format!("[delta_{}, gamma] = 0", j + 1),
                "equivariance",
                c.interior_norm(0),
                0,
            );
        }
        for (l, other) in t.deltas.iter().enumerate().skip(j + 1) {
            let c = LinearOperator::commutator(delta, other)?;
            r.record(
                format!("[delta_{}, delta_{}] = 0", j + 1, l + 1),
                "commuting derivations",
                c.interior_norm(0),
                0,
            );
        }
    }

    let j2 = t.j.compose(&t.j)?;
    r.record(
        "J^2 = eps",
        "KR signs",
        j2.interior_deviation(&id.scale_real(f64::from(signs.eps)), Some(0))?,
        0,
    );
    let jd = t.j.compose(&t.d)?;
    let dj = t.d.compose(&t.j)?.scale_real(f64::from(signs.eps_prime));
    r.record(
        "JD = eps' DJ",
        "KR signs",
        jd.interior_deviation(&dj, Some(0))?,
        0,
    );

    if let Some(g) = &t.gamma {
        let e2 = f64::from(signs.eps_double_prime.unwrap_or(1));
        let jg = t.j.compose(g)?;
        let gj = g.compose(&t.j)?.scale_real(e2);
        r.record(
            "J gamma = eps'' gamma J",
            "KR signs",
            jg.interior_deviation(&gj, Some(0))?,
            0,
        );
        r.record(
            "gamma^2 = 1",
            "grading",
            g.compose(g)?.interior_deviation(&id, Some(0))?,
            0,
        );
        r.record("gamma selfadjoint", "grading", g.selfadjoint_deviation(), 0);
        let anti = LinearOperator::anticommutator(g, &t.d)?;
        r.record("gamma D = -D gamma", "grading", anti.interior_norm(0), 0);
        for (i, (a, _)) in samples.pairs.iter().enumerate() {
            let c = LinearOperator::commutator(g, &t.pi(a)?)?;
            r.record(
                format!("[gamma, a] = 0 #{i}"),
                "grading",
                c.interior_norm(a.degree()),
                a.degree(),
            );
        }
    }
    Ok(r)
}

/// π_D(Σ a_p db_p) = Σ π(a_p)[D, π(b_p)].
pub fn one_form(
    coeffs: &[(AlgebraElement, AlgebraElement)],
    t: &TripleData,
) -> Result<LinearOperator> {
    let mut acc = LinearOperator::zero(t.space);
    for (a, b) in coeffs {
        let db = LinearOperator::commutator(&t.d, &t.pi(b)?)?;
        acc = acc.try_add(&t.pi(a)?.compose(&db)?)?;
    }
    let r = coeffs
        .iter()
        .map(|(a, b)| a.degree() + b.degree())
        .max()
        .unwrap_or(0);
    Ok(acc.with_shift_radius(r))
}

/// A universal one-form Σ a_p db_p given by its coefficient pairs.
pub type OneFormPresentation = Vec<(AlgebraElement, AlgebraElement)>;

/// Candidate syzygies Σ a_p db_p = 0 for the calculus of `t`:
/// telescoping, Maurer–Cartan relations (c·(U^q)*) dU^q = Σ_j q_j (c U_j*) dU_j,
/// additivity in b, and monomials U^q whose differential vanishes on the interior.
pub fn syzygy_samples(t: &TripleData, count: usize, seed: u64) -> Result<Vec<OneFormPresentation>> {
    use crate::sampling::random_element;
    use rand::Rng;

    let th = &t.theta;
    let k = th.dim();
    let one = AlgebraElement::one(th);
    let mut r = rng(seed);
    let mut out = Vec::new();

    let u1 = AlgebraElement::generator(th, 0)?;
    out.push(vec![
        (one.clone(), u1.clone()),
        (-&(&u1 * &u1.star()), u1.clone()),
    ]);

    for _ in 0..count {
        let c = random_element(th, 1, 2, &mut r);
        let q: Vec<i32> = (0..k).map(|_| r.gen_range(-2..=2)).collect();
        let uq = AlgebraElement::monomial(th, q.clone(), Complex64::new(1.0, 0.0))?;
        let mut p = vec![(&c * &uq.star(), uq)];
        for (j, qj) in q.iter().enumerate() {
            if *qj != 0 {
                let uj = AlgebraElement::generator(th, j)?;
                p.push((
                    (&c * &uj.star()).scale(Complex64::new(-f64::from(*qj), 0.0)),
                    uj,
                ));
            }
        }
        out.push(p);

        let a = random_element(th, 1, 2, &mut r);
        let b1 = random_element(th, 1, 2, &mut r);
        let b2 = random_element(th, 1, 2, &mut r);
        out.push(vec![(a.clone(), &b1 + &b2), (-&a, b1), (-&a, b2)]);
    }

    // monomials with vanishing differential
    let range: Vec<Vec<i32>> = (0..3usize.pow(k as u32))
        .map(|mut x| {
            (0..k)
                .map(|_| {
                    let v = (x % 3) as i32 - 1;
                    x /= 3;
                    v
                })
                .collect()
        })
        .collect();
    for q in range {
        if q.iter().all(|x| *x == 0) {
            continue;
        }
        let uq = AlgebraElement::monomial(th, q, Complex64::new(1.0, 0.0))?;
        let dq = LinearOperator::commutator(&t.d, &t.pi(&uq)?)?;
        if dq.interior_norm(1) == 0.0 {
            out.push(vec![(random_element(th, 1, 2, &mut r), uq)]);
        }
    }
    Ok(out)
}

/// For every presentation whose one-form vanishes, checks Σ a_p δ_i(b_p) = 0
/// for each fibre direction i.
pub fn check_calculus_compatibility(
    t: &TripleData,
    samples: &[OneFormPresentation],
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(tolerance);
    for (s, pres) in samples.iter().enumerate() {
        let form = one_form(pres, t)?;
        let radius = form.shift_radius();
        let size = form.interior_norm(radius);
        let vanishes = r.record(
            format!("syzygy #{s} vanishes"),
            "presentation of the zero one-form",
            size,
            radius,
        );
        if !vanishes {
            continue;
        }
        for i in 0..t.n {
            let mut acc = AlgebraElement::zero(&t.theta);
            for (a, b) in pres {
                acc = &acc + &(a * &b.derivation(i)?);
            }
            let dev = acc
                .pruned(0.0)
                .terms()
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            r.record(
                format!("calculus compatible #{s} delta_{}", i + 1),
                "compatible with the de Rham calculus",
                dev,
                0,
            );
        }
    }
    Ok(r)
}
