//! Strong 𝕋ⁿ-connections in the Dirac calculus, the D₀-connections ∇_ω on the
//! graded components A^{(q)}, and the twisted Dirac operators D_ω and 𝒟_ω.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, ElementTerm, GradedComponent, ThetaMatrix};
use crate::error::{Error, Result};
use crate::gns::LinearOperator;
use crate::projection::{
    base_triple_recipe, check_grading, check_isometric_fibres, h0_projector, horizontal_part,
    BaseRecipe, DPrime, JChoice, ProjectabilityData,
};
use crate::report::VerificationReport;
use crate::sampling::{random_base_element, random_homogeneous, rng, Samples};
use crate::triple::{one_form, OneFormPresentation, TripleData};

/// Serialized form of a connection family.
///
/// `b[i][j]` is the coefficient of ω_i along base direction j; the optional
/// `vertical_extra[i][l]` is added to the coefficient along fibre direction l.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSpec {
    pub n: usize,
    pub m: usize,
    pub vertical_units: bool,
    pub b: Vec<Vec<Vec<ElementTerm>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertical_extra: Option<Vec<Vec<Vec<ElementTerm>>>>,
}

/// n one-forms ω_i = Σ_l c_il U_l* dU_l, realized as Σ_l γ^l π(c_il).
#[derive(Clone, Debug)]
pub struct ConnectionFamily {
    theta: Arc<ThetaMatrix>,
    n: usize,
    m: usize,
    vertical_units: bool,
    /// n × (n+m) coefficients c_il.
    coefficients: Vec<Vec<AlgebraElement>>,
}

impl ConnectionFamily {
    /// Family with explicit coefficients c_il (fibre directions first).
    pub fn from_coefficients(
        theta: &Arc<ThetaMatrix>,
        n: usize,
        m: usize,
        coefficients: Vec<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        let k = n + m;
        if theta.dim() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: theta.dim(),
            });
        }
        if coefficients.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coefficients.len(),
            });
        }
        for row in &coefficients {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            if row.iter().any(|c| **c.theta() != **theta) {
                return Err(Error::ThetaMismatch);
            }
        }
        let units = (0..n).all(|i| {
            (0..n).all(|l| {
                let want = if i == l {
                    AlgebraElement::one(theta)
                } else {
                    AlgebraElement::zero(theta)
                };
                coefficients[i][l] == want
            })
        });
        Ok(ConnectionFamily {
            theta: Arc::clone(theta),
            n,
            m,
            vertical_units: units,
            coefficients,
        })
    }

    /// ω_i = U_i* dU_i, the connection coming from ℓ.
    pub fn canonical(theta: &Arc<ThetaMatrix>, n: usize, m: usize) -> Result<Self> {
        let empty = vec![vec![AlgebraElement::zero(theta); m]; n];
        Self::with_horizontal(theta, n, m, empty)
    }

    /// ω_i = U_i* dU_i + Σ_j b_ij U_{n+j}* dU_{n+j}.
    pub fn with_horizontal(
        theta: &Arc<ThetaMatrix>,
        n: usize,
        m: usize,
        b: Vec<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        if b.len() != n || b.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidArgument(format!(
                "horizontal coefficients must be {n} x {m}"
            )));
        }
        let coefficients = b
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut c: Vec<AlgebraElement> = (0..n)
                    .map(|l| {
                        if l == i {
                            AlgebraElement::one(theta)
                        } else {
                            AlgebraElement::zero(theta)
                        }
                    })
                    .collect();
                c.extend(row);
                c
            })
            .collect();
        Self::from_coefficients(theta, n, m, coefficients)
    }

    /// Constant real horizontal coefficients, `c` row-major n × m.
    pub fn constant(theta: &Arc<ThetaMatrix>, n: usize, m: usize, c: &[f64]) -> Result<Self> {
        if c.len() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                got: c.len(),
            });
        }
        let b = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| AlgebraElement::scalar(theta, Complex64::new(c[i * m + j], 0.0)))
                    .collect()
            })
            .collect();
        Self::with_horizontal(theta, n, m, b)
    }

    pub fn from_spec(theta: &Arc<ThetaMatrix>, spec: &ConnectionSpec) -> Result<Self> {
        let (n, m) = (spec.n, spec.m);
        if spec.b.len() != n || spec.b.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidArgument(format!("b must be {n} x {m}")));
        }
        let mut coefficients = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n + m);
            for l in 0..n {
                let mut c = if spec.vertical_units && l == i {
                    AlgebraElement::one(theta)
                } else {
                    AlgebraElement::zero(theta)
                };
                if let Some(extra) = &spec.vertical_extra {
                    let terms = extra.get(i).and_then(|r| r.get(l)).ok_or_else(|| {
                        Error::InvalidArgument(format!("vertical_extra must be {n} x {n}"))
                    })?;
                    c = c.try_add(&AlgebraElement::from_json_terms(theta, terms)?)?;
                }
                row.push(c);
            }
            for terms in &spec.b[i] {
                row.push(AlgebraElement::from_json_terms(theta, terms)?);
            }
            coefficients.push(row);
        }
        Self::from_coefficients(theta, n, m, coefficients)
    }

    pub fn to_spec(&self) -> ConnectionSpec {
        let n = self.n;
        let b = self
            .coefficients
            .iter()
            .map(|row| row[n..].iter().map(AlgebraElement::to_json_terms).collect())
            .collect();
        let extra: Vec<Vec<Vec<ElementTerm>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|l| {
                        let unit = if self.vertical_units && i == l {
                            AlgebraElement::one(&self.theta)
                        } else {
                            AlgebraElement::zero(&self.theta)
                        };
                        (&self.coefficients[i][l] - &unit).to_json_terms()
                    })
                    .collect()
            })
            .collect();
        let has_extra = extra.iter().flatten().any(|t| !t.is_empty());
        ConnectionSpec {
            n,
            m: self.m,
            vertical_units: self.vertical_units,
            b,
            vertical_extra: has_extra.then_some(extra),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn theta(&self) -> &Arc<ThetaMatrix> {
        &self.theta
    }

    pub fn coefficient(&self, i: usize, l: usize) -> &AlgebraElement {
        &self.coefficients[i][l]
    }

    /// Largest index degree among the coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.coefficients
            .iter()
            .flatten()
            .map(AlgebraElement::degree)
            .max()
            .unwrap_or(0)
    }

    /// Every ω_i is selfadjoint iff every c_il is.
    pub fn is_selfadjoint(&self) -> bool {
        self.coefficients
            .iter()
            .flatten()
            .all(|c| c.max_abs_diff(&c.star()) <= 1e-14)
    }

    /// Coefficient pairs (c_il U_l*, U_l) with Σ π(p)[D, π(q)] = ω_i.
    pub fn presentation(&self, i: usize) -> Result<OneFormPresentation> {
        let mut out = Vec::new();
        for (l, c) in self.coefficients[i].iter().enumerate() {
            if !c.is_zero() {
                let u = AlgebraElement::generator(&self.theta, l)?;
                out.push((c * &u.star(), u));
            }
        }
        Ok(out)
    }

    fn check_triple(&self, t: &TripleData) -> Result<()> {
        if t.n != self.n || t.m != self.m {
            return Err(Error::InvalidArgument(format!(
                "family is for (n, m) = ({}, {}), triple has ({}, {})",
                self.n, self.m, t.n, t.m
            )));
        }
        if *t.theta != *self.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    /// The operators ω_i on the space of `t`.
    pub fn forms(&self, t: &TripleData) -> Result<Vec<LinearOperator>> {
        self.check_triple(t)?;
        let radius = self.coefficient_degree();
        self.coefficients
            .iter()
            .map(|row| {
                let mut acc = LinearOperator::zero(t.space);
                for (l, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.try_add(&t.gamma_op(l)?.compose(&t.pi(c)?)?)?;
                    }
                }
                Ok(acc.with_shift_radius(radius))
            })
            .collect()
    }

    /// ω(z^q) = Σ q_i ω_i.
    pub fn form_at(&self, q: &[i32], t: &TripleData) -> Result<LinearOperator> {
        if q.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: q.len(),
            });
        }
        let mut acc = LinearOperator::zero(t.space).with_shift_radius(self.coefficient_degree());
        for (w, qi) in self.forms(t)?.iter().zip(q) {
            acc = acc.try_add(&w.scale_real(f64::from(*qi)))?;
        }
        Ok(acc)
    }
}

/// The three conditions of a strong 𝕋ⁿ-connection.
///
/// (iii) is tested through the fibre gamma components ½{γ^l, ·}, l < n, of
/// [D, π(a)] − Σ π(δ_i a) ω_i, which vanish exactly on Ω¹_D(B)A for flat tori.
pub fn check_strong_connection(
    family: &ConnectionFamily,
    t: &TripleData,
    samples: &Samples,
    tolerance: f64,
) -> Result<VerificationReport> {
    let forms = family.forms(t)?;
    let n = family.n;
    let mut r = VerificationReport::new(tolerance);

    for (i, w) in forms.iter().enumerate() {
        for j in 0..n {
            let c = LinearOperator::commutator(&t.deltas[j], w)?;
            r.record(
                format!("(i) delta_{}(omega_{}) = 0", j + 1, i + 1),
                "strong connection (i)",
                c.interior_norm(w.shift_radius()),
                w.shift_radius(),
            );
        }
    }

    for (i, w) in forms.iter().enumerate() {
        let pres = family.presentation(i)?;
        for l in 0..n {
            let mut acc = AlgebraElement::zero(&family.theta);
            for (p, q) in &pres {
                acc = &acc + &(p * &q.derivation(l)?);
            }
            let want = if l == i {
                AlgebraElement::one(&family.theta)
            } else {
                AlgebraElement::zero(&family.theta)
            };
            r.record(
                format!("(ii) sum p delta_{}(q) for omega_{}", l + 1, i + 1),
                "strong connection (ii)",
                acc.max_abs_diff(&want),
                0,
            );
        }
        let realized = one_form(&pres, t)?;
        r.record(
            format!("(ii) presentation realizes omega_{}", i + 1),
            "strong connection (ii)",
            realized.interior_deviation(w, None)?,
            realized.shift_radius().max(w.shift_radius()),
        );
    }

    let gammas: Vec<LinearOperator> = (0..n).map(|l| t.gamma_op(l)).collect::<Result<_>>()?;
    for (s, (a, _)) in samples.pairs.iter().enumerate() {
        let mut x = LinearOperator::commutator(&t.d, &t.pi(a)?)?;
        for (i, w) in forms.iter().enumerate() {
            x = x.try_sub(&t.pi(&a.derivation(i)?)?.compose(w)?)?;
        }
        let radius = a.degree() + family.coefficient_degree();
        for (l, g) in gammas.iter().enumerate() {
            let comp = LinearOperator::anticommutator(g, &x)?.scale_real(0.5);
            r.record(
                format!("(iii) horizontal #{s} gamma_{}", l + 1),
                "strong connection (iii)",
                comp.interior_norm(radius),
                radius,
            );
        }
    }
    Ok(r)
}

/// π((U^{(q,0)})*)[D, π(U^{(q,0)})], the image of ω(z^q) = ℓ(z^q) − ε(z^q)
/// in the Dirac calculus.
pub fn connection_from_ell(t: &TripleData, q: &[i32]) -> Result<LinearOperator> {
    if q.len() != t.n {
        return Err(Error::DimensionMismatch {
            expected: t.n,
            got: q.len(),
        });
    }
    let mut idx = q.to_vec();
    idx.resize(t.n + t.m, 0);
    let u = AlgebraElement::monomial(&t.theta, idx, Complex64::new(1.0, 0.0))?;
    one_form(&[(u.star(), u)], t)
}

/// Compares connection_from_ell with Σ q_i ω_i for each degree.
pub fn check_ell_connection(
    family: &ConnectionFamily,
    t: &TripleData,
    degrees: &[Vec<i32>],
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(tolerance);
    for q in degrees {
        let from_ell = connection_from_ell(t, q)?;
        let from_family = family.form_at(q, t)?;
        let radius = from_ell.shift_radius().max(from_family.shift_radius());
        r.record(
            format!("omega(z^{q:?}) from l"),
            "strong connection form from l",
            from_ell.interior_deviation(&from_family, Some(radius))?,
            radius,
        );
    }
    Ok(r)
}

/// ∇_ω(a) = [D, π(a)] − Σ q_i π(a) ω_i for a ∈ A^{(q)}.
pub fn nabla_omega(
    a: &GradedComponent,
    family: &ConnectionFamily,
    t: &TripleData,
) -> Result<LinearOperator> {
    let forms = family.forms(t)?;
    nabla_with(a, &forms, t)
}

fn nabla_with(
    a: &GradedComponent,
    forms: &[LinearOperator],
    t: &TripleData,
) -> Result<LinearOperator> {
    if a.degree.len() != forms.len() {
        return Err(Error::DimensionMismatch {
            expected: forms.len(),
            got: a.degree.len(),
        });
    }
    let pa = t.pi(&a.element)?;
    let mut out = LinearOperator::commutator(&t.d, &pa)?;
    for (w, qi) in forms.iter().zip(&a.degree) {
        if *qi != 0 {
            out = out.try_sub(&pa.compose(w)?.scale_real(f64::from(*qi)))?;
        }
    }
    let radius = a.element.degree()
        + forms
            .iter()
            .map(LinearOperator::shift_radius)
            .max()
            .unwrap_or(0);
    Ok(out.with_shift_radius(radius))
}

fn graded(
    theta: &Arc<ThetaMatrix>,
    q: &[i32],
    seed: &mut crate::sampling::SampleRng,
) -> Result<GradedComponent> {
    let deg = q.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0).max(1);
    GradedComponent::new(q.to_vec(), random_homogeneous(theta, q, deg, 2, seed))
}

/// D-connection Leibniz rule over B and hermiticity of ∇_ω on sampled
/// elements of each A^{(q)}.
pub fn check_nabla(
    family: &ConnectionFamily,
    t: &TripleData,
    degrees: &[Vec<i32>],
    seed: u64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let forms = family.forms(t)?;
    let th = &family.theta;
    let mut r = VerificationReport::new(tolerance);
    let mut g = rng(seed);
    for q in degrees {
        let a1 = graded(th, q, &mut g)?;
        let a2 = graded(th, q, &mut g)?;
        let b = random_base_element(th, family.n, 1, 2, &mut g);

        let ba = GradedComponent::new(q.clone(), &b * &a1.element)?;
        let lhs = nabla_with(&ba, &forms, t)?;
        let pb = t.pi(&b)?;
        let rhs = LinearOperator::commutator(&t.d, &pb)?
            .compose(&t.pi(&a1.element)?)?
            .try_add(&pb.compose(&nabla_with(&a1, &forms, t)?)?)?;
        let radius = lhs.shift_radius().max(rhs.shift_radius());
        r.record(
            format!("Leibniz over B q={q:?}"),
            "D-connection",
            lhs.interior_deviation(&rhs, Some(radius))?,
            radius,
        );

        let n1 = nabla_with(&a1, &forms, t)?;
        let n2 = nabla_with(&a2, &forms, t)?;
        let p1 = t.pi(&a1.element)?;
        let p2 = t.pi(&a2.element)?;
        let lhs = n2
            .compose(&p1.adjoint())?
            .try_sub(&p2.compose(&n1.adjoint())?)?
            .try_sub(&LinearOperator::commutator(
                &t.d,
                &t.pi(&(&a2.element * &a1.element.star()))?,
            )?)?;
        let radius = n1.shift_radius() + a2.element.degree();
        r.record(
            format!("hermitian q={q:?}"),
            "hermitian D-connection",
            lhs.interior_norm(radius),
            radius,
        );
    }
    Ok(r)
}

/// D_ω and 𝒟_ω = D_v + D_ω together with the choices used to build them.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub family: ConnectionFamily,
    pub recipe: BaseRecipe,
    /// J₀ on the full space: j₀ when D′₀ = D₀, Γj₀ when D′₀ = ΓD₀.
    pub j0_used: JChoice,
    pub j0: LinearOperator,
    pub z_prime: LinearOperator,
    pub d_omega: LinearOperator,
    pub script_d_omega: LinearOperator,
}

/// D_ω = D + Σ_i J₀ω_i*J₀⁻¹δ_i − Z′ and 𝒟_ω = D_v + D_ω, with Z′ from `p`
/// and J₀ chosen from the base recipe.
pub fn twisted_dirac(p: &ProjectabilityData, family: &ConnectionFamily) -> Result<TwistData> {
    let t = &p.triple;
    let recipe = base_triple_recipe((t.m % 8) as u8, (t.n % 8) as u8)?;
    let flip = recipe.d0_prime == DPrime::GammaD0;
    let j0_used = match (recipe.j0, flip) {
        (JChoice::J, false) | (JChoice::GammaJ, true) => JChoice::J,
        _ => JChoice::GammaJ,
    };
    twisted_dirac_with(p, family, j0_used)
}

/// As [`twisted_dirac`] with an explicit J₀ (J or ΓJ on the full space).
pub fn twisted_dirac_with(
    p: &ProjectabilityData,
    family: &ConnectionFamily,
    j0_used: JChoice,
) -> Result<TwistData> {
    let t = &p.triple;
    if !family.is_selfadjoint() {
        let mut report = VerificationReport::new(1e-14);
        for i in 0..family.n {
            for l in 0..family.n + family.m {
                let c = family.coefficient(i, l);
                report.record(
                    format!("c_{}{} selfadjoint", i + 1, l + 1),
                    "selfadjoint connection",
                    c.max_abs_diff(&c.star()),
                    0,
                );
            }
        }
        return Err(Error::precondition(
            "connection forms must be selfadjoint",
            report,
        ));
    }
    let recipe = base_triple_recipe((t.m % 8) as u8, (t.n % 8) as u8)?;
    let j0 = match j0_used {
        JChoice::J => t.j.clone(),
        JChoice::GammaJ => p.gamma.compose(&t.j)?,
    };

    // J₀ = S ⊗ (Tomita involution) with S = C or ΓC, so
    // J₀ω_i*J₀⁻¹ = Σ_l (S γ̄^l S*) ⊗ Jπ(c_il)*J⁻¹, and the spinor factor is exact.
    let c = t.spinor_charge_conj();
    let s = match j0_used {
        JChoice::J => c,
        JChoice::GammaJ => t.fibre_grading(p.gamma_sign)? * c,
    };
    let mut d_omega = t.d.clone();
    for (i, delta) in t.deltas.iter().enumerate().take(family.n) {
        let mut twisted = LinearOperator::zero(t.space);
        for l in 0..family.n + family.m {
            let coeff = family.coefficient(i, l);
            if coeff.is_zero() {
                continue;
            }
            let g = t.spinor_gamma(l).map(|z| z.conj());
            let spin = LinearOperator::spinor_constant(t.space, &(&s * g * s.adjoint()))?;
            let right = if coeff.degree() == 0 {
                spin.scale(coeff.coeff(&vec![0; family.n + family.m]))
            } else {
                spin.compose(&t.opposite(coeff)?)?
            };
            twisted = twisted.try_add(&right)?;
        }
        d_omega = d_omega.try_add(&twisted.compose(delta)?)?;
    }
    let d_omega = d_omega.try_sub(&p.z_prime)?;
    let script_d_omega = p.d_v.try_add(&d_omega)?;
    Ok(TwistData {
        family: family.clone(),
        recipe,
        j0_used,
        j0,
        z_prime: p.z_prime.clone(),
        d_omega,
        script_d_omega,
    })
}

/// Selfadjointness, equivariance and cutoff-stable commutators of D_ω.
pub fn verify_twisted_dirac(
    tw: &TwistData,
    p: &ProjectabilityData,
    samples: &Samples,
    tolerance: f64,
) -> Result<VerificationReport> {
    let t = &p.triple;
    let mut r = VerificationReport::new(tolerance);
    r.record(
        "D_omega selfadjoint",
        "twisted Dirac operator",
        tw.d_omega.selfadjoint_deviation(),
        0,
    );
    r.record(
        "script D_omega selfadjoint",
        "twisted Dirac operator",
        tw.script_d_omega.selfadjoint_deviation(),
        0,
    );
    // equivariance is only required along the fibre torus
    for (j, delta) in t.deltas.iter().enumerate().take(t.n) {
        let c = LinearOperator::commutator(delta, &tw.d_omega)?;
        r.record(
            format!("[delta_{}, D_omega] = 0", j + 1),
            "twisted Dirac operator",
            c.interior_norm(c.shift_radius()),
            c.shift_radius(),
        );
    }

    let wider_p = p.at_cutoff(t.space.cutoff + 2, tolerance)?;
    let wider_family = tw.family.clone();
    let wider = twisted_dirac(&wider_p, &wider_family)?;
    for (i, (a, _)) in samples.pairs.iter().enumerate() {
        let radius = a.degree() + tw.d_omega.shift_radius();
        let here = LinearOperator::commutator(&tw.d_omega, &t.pi(a)?)?.interior_column_sup(radius);
        let there = LinearOperator::commutator(&wider.d_omega, &wider_p.triple.pi(a)?)?
            .interior_column_sup(radius);
        r.record(
            format!("bounded [D_omega, a] #{i}"),
            "bounded commutators (cutoff-stable norm)",
            (here - there).abs(),
            radius,
        );
    }
    Ok(r)
}

/// Interior deviation between D_ω and D_h; compatible iff it is within tolerance.
pub fn check_compatibility(
    tw: &TwistData,
    p: &ProjectabilityData,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(tolerance);
    let radius = tw.d_omega.shift_radius().max(p.d_h.shift_radius());
    r.record(
        "D_omega = D_h",
        "compatibility of the connection with D",
        tw.d_omega.interior_deviation(&p.d_h, Some(radius))?,
        radius,
    );
    Ok(r)
}

/// On each sector H_q, D_ω(hp) equals D_M(hp) = (D₀h)p + h∇_ω(p), with
/// hp = Jπ(p)*J⁻¹h and the one-form action hη = −Jη*J⁻¹h. Checked on
/// h ∈ H₀ and a random p ∈ A^{(q)} per degree.
///
/// With J₀ = ΓJ this fails wherever D_ω differs from the operator built
/// with J₀ = J, e.g. nonzero constant families with n odd.
pub fn check_sector_equivalence(
    tw: &TwistData,
    p: &ProjectabilityData,
    degrees: &[Vec<i32>],
    seed: u64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let t = &p.triple;
    let forms = tw.family.forms(t)?;
    let p0 = h0_projector(&t.space, t.n);
    let d0 = p.d_h.compose(&p0)?;
    let mut r = VerificationReport::new(tolerance);
    let mut g = rng(seed);
    for q in degrees {
        let a = graded(&t.theta, q, &mut g)?;
        let right = t.opposite(&a.element)?;
        let lhs = tw.d_omega.compose(&right)?.compose(&p0)?;
        let nabla = nabla_with(&a, &forms, t)?;
        let action = nabla.adjoint().conjugate_by(&t.j)?.compose(&p0)?;
        let rhs = right.compose(&d0)?.try_sub(&action)?;
        let radius = lhs.shift_radius().max(rhs.shift_radius());
        r.record(
            format!("sector q={q:?}"),
            "D_M(hm) = (Dh)m + h nabla(m)",
            lhs.interior_deviation(&rhs, Some(radius))?,
            radius,
        );
    }
    Ok(r)
}

/// Projectability and isometric fibres of (A, H, 𝒟_ω) with the same Γ, and
/// horizontal part of 𝒟_ω equal to D_ω.
pub fn verify_reprojection(
    tw: &TwistData,
    p: &ProjectabilityData,
    samples: &Samples,
    tolerance: f64,
) -> Result<VerificationReport> {
    let t2 = p.triple.with_dirac(tw.script_d_omega.clone())?;
    let mut r = VerificationReport::new(tolerance);
    r.extend_prefixed("grading: ", check_grading(&t2, &p.gamma, tolerance)?);

    let d_h = horizontal_part(&t2.d, &p.gamma, t2.n)?;
    let radius = d_h.shift_radius().max(tw.d_omega.shift_radius());
    r.record(
        "horizontal part of script D_omega = D_omega",
        "reprojection",
        d_h.interior_deviation(&tw.d_omega, Some(radius))?,
        radius,
    );
    r.record(
        "script D_omega selfadjoint",
        "reprojection",
        t2.d.selfadjoint_deviation(),
        0,
    );
    for (j, delta) in t2.deltas.iter().enumerate().take(t2.n) {
        let c = LinearOperator::commutator(delta, &t2.d)?;
        r.record(
            format!("[delta_{}, script D_omega] = 0", j + 1),
            "reprojection",
            c.interior_norm(c.shift_radius()),
            c.shift_radius(),
        );
    }

    let zero = LinearOperator::zero(t2.space);
    let p2 = ProjectabilityData {
        triple: t2,
        gamma: p.gamma.clone(),
        gamma_sign: p.gamma_sign,
        d_h,
        d_v: p.d_v.clone(),
        z: zero.clone(),
        z_prime: zero,
        z_source: None,
    };
    r.extend_prefixed("fibres: ", check_isometric_fibres(&p2, samples, tolerance)?);
    Ok(r)
}
