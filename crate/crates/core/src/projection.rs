//! Fibre grading Γ, the split D = D_v + D_h + Z, restriction to the
//! 𝕋ⁿ-invariant subspace H₀ and the real structures of the base triple.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, ThetaMatrix};
use crate::clifford::{kr_signs, max_abs_diff};
use crate::error::{Error, Result};
use crate::gns::{represent, LinearOperator, TruncatedSpace};
use crate::report::VerificationReport;
use crate::sampling::{random_theta, rng, Samples};
use crate::triple::{build_flat_triple_with, SpinorModule, TripleData};

/// P₀: projection onto lattice sectors whose first n indices vanish.
pub fn h0_projector(space: &TruncatedSpace, n: usize) -> LinearOperator {
    LinearOperator::lattice_diagonal(*space, |k| {
        if k[..n].iter().all(|x| *x == 0) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn h0_indices(space: &TruncatedSpace, n: usize) -> Vec<usize> {
    let sd = space.spinor_dim;
    (0..space.lattice_size())
        .filter(|li| space.point(*li)[..n].iter().all(|x| *x == 0))
        .flat_map(|li| (0..sd).map(move |s| li * sd + s))
        .collect()
}

/// Checks the conditions a fibre grading Γ must satisfy.
pub fn check_grading(
    t: &TripleData,
    gamma: &LinearOperator,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(tolerance);
    let id = LinearOperator::identity(t.space);
    r.record(
        "Gamma^2 = 1",
        "fibre grading",
        gamma.compose(gamma)?.interior_deviation(&id, Some(0))?,
        0,
    );
    r.record(
        "Gamma selfadjoint",
        "fibre grading",
        gamma.selfadjoint_deviation(),
        0,
    );
    for (i, u) in t.algebra.iter().enumerate() {
        let c = LinearOperator::commutator(gamma, &t.pi(u)?)?;
        r.record(
            format!("[Gamma, U_{}] = 0", i + 1),
            "fibre grading",
            c.interior_norm(1),
            1,
        );
    }
    for j in 0..t.n {
        let c = LinearOperator::commutator(gamma, &t.deltas[j])?;
        r.record(
            format!("[Gamma, delta_{}] = 0", j + 1),
            "fibre grading",
            c.interior_norm(0),
            0,
        );
    }
    let s = t.required_j_gamma_sign();
    let jg = t.j.compose(gamma)?;
    let gj = gamma.compose(&t.j)?.scale_real(s);
    r.record(
        if s > 0.0 {
            "J Gamma = Gamma J"
        } else {
            "J Gamma = -Gamma J"
        },
        "fibre grading",
        jg.interior_deviation(&gj, Some(0))?,
        0,
    );
    if let Some(g) = &t.gamma {
        let sign = if t.n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let lhs = gamma.compose(g)?;
        let rhs = g.compose(gamma)?.scale_real(sign);
        r.record(
            "Gamma gamma = (-1)^n gamma Gamma",
            "fibre grading",
            lhs.interior_deviation(&rhs, Some(0))?,
            0,
        );
    }
    Ok(r)
}

/// D_h = ½Γ{D,Γ} for n even and ½Γ[Γ,D] for n odd.
pub fn horizontal_dirac(
    t: &TripleData,
    gamma: &LinearOperator,
    tolerance: f64,
) -> Result<LinearOperator> {
    let report = check_grading(t, gamma, tolerance)?;
    if !report.all_pass() {
        return Err(Error::precondition("fibre grading conditions", report));
    }
    horizontal_part(&t.d, gamma, t.n)
}

pub(crate) fn horizontal_part(
    d: &LinearOperator,
    gamma: &LinearOperator,
    n: usize,
) -> Result<LinearOperator> {
    let inner = if n.is_multiple_of(2) {
        LinearOperator::anticommutator(d, gamma)?
    } else {
        LinearOperator::commutator(gamma, d)?
    };
    Ok(gamma.compose(&inner)?.scale_real(0.5))
}

/// Whether the irreducible module already gives JΓ the sign required for
/// projectability; otherwise the doubled module is needed.
pub fn select_module(n: usize, m: usize) -> Result<SpinorModule> {
    let th = Arc::new(ThetaMatrix::zero(n + m));
    let t = build_flat_triple_with(&th, n, m, 1, SpinorModule::Irreducible, None)?;
    let g = t.fibre_grading(1.0)?;
    let c = &t.gammas.charge_conj;
    let lhs = c * g.map(|z| z.conj());
    let rhs = &g * c * Complex64::new(t.required_j_gamma_sign(), 0.0);
    Ok(if max_abs_diff(&lhs, &rhs) < 1e-12 {
        SpinorModule::Irreducible
    } else {
        SpinorModule::Doubled
    })
}

/// Γ together with the split D = D_v + D_h + Z.
#[derive(Clone, Debug)]
pub struct ProjectabilityData {
    pub triple: TripleData,
    pub gamma: LinearOperator,
    pub gamma_sign: f64,
    pub d_h: LinearOperator,
    pub d_v: LinearOperator,
    pub z: LinearOperator,
    pub z_prime: LinearOperator,
    /// b with Z = Z′ = π(b), when Z is not zero.
    pub z_source: Option<AlgebraElement>,
}

/// D_v = Σ_{j<n} γʲδⱼ.
pub fn flat_vertical_dirac(t: &TripleData) -> Result<LinearOperator> {
    let mut dv = LinearOperator::zero(t.space);
    for j in 0..t.n {
        dv = dv.try_add(&t.gamma_op(j)?.compose(&t.deltas[j])?)?;
    }
    Ok(dv)
}

impl ProjectabilityData {
    /// Flat data: Γ = ±(fibre grading), D_v = Σ_{j<n} γʲδⱼ, Z = Z′ = 0.
    pub fn flat(t: &TripleData, gamma_sign: f64, tolerance: f64) -> Result<Self> {
        let gamma = LinearOperator::spinor_constant(t.space, &t.fibre_grading(gamma_sign)?)?;
        let d_h = horizontal_dirac(t, &gamma, tolerance)?;
        let d_v = flat_vertical_dirac(t)?;
        Ok(ProjectabilityData {
            triple: t.clone(),
            gamma,
            gamma_sign,
            d_h,
            d_v,
            z: LinearOperator::zero(t.space),
            z_prime: LinearOperator::zero(t.space),
            z_source: None,
        })
    }

    /// Adds the bounded term π(b) to D and records it as Z (with Z′ = π(b)).
    /// b should be selfadjoint, central and Γ-commuting for the fibre checks to pass.
    pub fn with_bounded_term(&self, b: &AlgebraElement, tolerance: f64) -> Result<Self> {
        let z = self.triple.pi(b)?;
        let t = self.triple.with_dirac(self.triple.d.try_add(&z)?)?;
        let d_h = horizontal_dirac(&t, &self.gamma, tolerance)?;
        Ok(ProjectabilityData {
            triple: t,
            d_h,
            z: z.clone(),
            z_prime: z,
            z_source: Some(b.clone()),
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.triple.n
    }

    /// The same data rebuilt at another cutoff (flat D plus the recorded Z).
    pub fn at_cutoff(&self, cutoff: u32, tolerance: f64) -> Result<Self> {
        let flat =
            ProjectabilityData::flat(&self.triple.at_cutoff(cutoff)?, self.gamma_sign, tolerance)?;
        match &self.z_source {
            Some(b) => flat.with_bounded_term(b, tolerance),
            None => Ok(flat),
        }
    }
}

/// Decomposition identity and the isometric-fibres conditions (a)–(f).
pub fn check_isometric_fibres(
    p: &ProjectabilityData,
    samples: &Samples,
    tolerance: f64,
) -> Result<VerificationReport> {
    let t = &p.triple;
    let n = t.n;
    let mut r = VerificationReport::new(tolerance);

    let sum = p.d_v.try_add(&p.d_h)?.try_add(&p.z)?;
    r.record(
        "decomposition D = D_v + D_h + Z",
        "isometric fibres",
        t.d.interior_deviation(&sum, Some(p.z.shift_radius()))?,
        p.z.shift_radius(),
    );

    let p0 = h0_projector(&t.space, n);
    let on_h0 = p.d_v.compose(&p0)?;
    r.record(
        "(a) D_v = 0 on H_0",
        "isometric fibres",
        on_h0.interior_norm(on_h0.shift_radius()),
        on_h0.shift_radius(),
    );

    let (b, name) = if n % 2 == 1 {
        (
            LinearOperator::commutator(&p.d_v, &p.gamma)?,
            "(b) [D_v, Gamma] = 0",
        )
    } else {
        (
            LinearOperator::anticommutator(&p.d_v, &p.gamma)?,
            "(b) {D_v, Gamma} = 0",
        )
    };
    r.record(
        name,
        "isometric fibres",
        b.interior_norm(b.shift_radius()),
        b.shift_radius(),
    );

    for i in 0..n {
        let c = LinearOperator::commutator(&p.d_v, &t.deltas[i])?;
        r.record(
            format!("(c) [D_v, delta_{}] = 0", i + 1),
            "isometric fibres",
            c.interior_norm(c.shift_radius()),
            c.shift_radius(),
        );
    }

    let zr = p.z.shift_radius();
    let stability = match &p.z_source {
        Some(b) => {
            let wider = TruncatedSpace::new(t.space.k, t.space.cutoff + 2, t.space.spinor_dim)?;
            let there = represent(b, &wider)?.interior_column_sup(zr);
            (p.z.interior_column_sup(zr) - there).abs()
        }
        None => p.z.norm_bound(),
    };
    r.record(
        "(d) Z bounded (cutoff-stable norm)",
        "isometric fibres",
        stability,
        zr,
    );

    r.record(
        "(f) Z' selfadjoint",
        "isometric fibres",
        p.z_prime.selfadjoint_deviation(),
        zr,
    );
    for (i, (a, _)) in samples.pairs.iter().enumerate() {
        let pa = t.pi(a)?;
        let radius = zr + a.degree();
        let c = LinearOperator::commutator(&p.z, &pa)?;
        r.record(
            format!("(e) [Z, a] = 0 #{i}"),
            "isometric fibres",
            c.interior_norm(radius),
            radius,
        );
        let ja = t.opposite(a)?;
        let lhs = ja.compose(&p.z)?;
        let rhs = p.z_prime.compose(&ja)?;
        r.record(
            format!("(f) J a* J^-1 Z = Z' J a* J^-1 #{i}"),
            "isometric fibres",
            lhs.interior_deviation(&rhs, Some(radius))?,
            radius,
        );
    }

    for (i, (b, _)) in samples.base_pairs.iter().enumerate() {
        let pb = t.pi(b)?;
        let lhs = LinearOperator::commutator(&p.d_h, &pb)?;
        let rhs = LinearOperator::commutator(&t.d, &pb)?;
        r.record(
            format!("[D_h, b] = [D, b] #{i}"),
            "same calculus on B",
            lhs.interior_deviation(&rhs, Some(b.degree() + zr))?,
            b.degree() + zr,
        );
    }
    Ok(r)
}

/// Operators of the total triple restricted to H₀.
#[derive(Clone, Debug)]
pub struct BaseTriple {
    pub space: TruncatedSpace,
    pub n: usize,
    /// KR-dimension of the base, j = m.
    pub kr_dim_base: usize,
    pub d0: LinearOperator,
    pub j: LinearOperator,
    pub gamma_fibre: LinearOperator,
    pub chirality: Option<LinearOperator>,
}

/// Restricts D_h, J, Γ and γ to H₀ after checking H₀ is invariant under
/// them and under B, then checks commutant and first-order conditions for B.
/// Meant to be called once the isometric-fibres report passes.
pub fn restrict_to_h0(
    p: &ProjectabilityData,
    samples: &Samples,
    tolerance: f64,
) -> Result<(BaseTriple, VerificationReport)> {
    let t = &p.triple;
    let n = t.n;
    let idx = h0_indices(&t.space, n);
    if idx.is_empty() {
        return Err(Error::Degenerate("H_0 is trivial".into()));
    }
    let base_space = TruncatedSpace::new(t.m, t.space.cutoff, t.space.spinor_dim)?;
    let mut r = VerificationReport::new(tolerance);

    let p0 = h0_projector(&t.space, n);
    let q0 = LinearOperator::identity(t.space).try_sub(&p0)?;
    let mut leak = |name: &str, x: &LinearOperator| -> Result<()> {
        let l = q0.compose(x)?.compose(&p0)?;
        r.record(
            format!("H_0 invariant under {name}"),
            "restriction to H_0",
            l.interior_norm(x.shift_radius()),
            x.shift_radius(),
        );
        Ok(())
    };
    leak("D_h", &p.d_h)?;
    leak("Gamma", &p.gamma)?;
    leak("J", &t.j)?;
    if let Some(g) = &t.gamma {
        leak("gamma", g)?;
    }
    let base_ops: Vec<(LinearOperator, LinearOperator)> = samples
        .base_pairs
        .iter()
        .map(|(b, c)| Ok((t.pi(b)?, t.pi(c)?)))
        .collect::<Result<_>>()?;
    for (i, (pb, _)) in base_ops.iter().enumerate() {
        leak(&format!("b #{i}"), pb)?;
    }

    let d0 = p.d_h.restrict(&idx, base_space)?;
    let j = t.j.restrict(&idx, base_space)?;
    let gamma_fibre = p.gamma.restrict(&idx, base_space)?;
    let chirality = t
        .gamma
        .as_ref()
        .map(|g| g.restrict(&idx, base_space))
        .transpose()?;

    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let rel = LinearOperator::bracket(&gamma_fibre, &d0, sign)?;
    r.record(
        if n.is_multiple_of(2) {
            "Gamma D_0 = D_0 Gamma"
        } else {
            "Gamma D_0 = -D_0 Gamma"
        },
        "restriction to H_0",
        rel.interior_norm(0),
        0,
    );

    for (i, ((b, c), (pb, pc))) in samples.base_pairs.iter().zip(&base_ops).enumerate() {
        let radius = b.degree() + c.degree();
        let pb0 = pb.restrict(&idx, base_space)?;
        let jc0 = pc.restrict(&idx, base_space)?.adjoint().conjugate_by(&j)?;
        let comm = LinearOperator::commutator(&pb0, &jc0)?;
        r.record(
            format!("base commutant #{i}"),
            "J_0 maps B into its commutant",
            comm.interior_norm(radius),
            radius,
        );
        let fo = LinearOperator::commutator(&LinearOperator::commutator(&d0, &pb0)?, &jc0)?;
        r.record(
            format!("base first-order #{i}"),
            "first-order condition on H_0",
            fo.interior_norm(radius),
            radius,
        );
    }

    Ok((
        BaseTriple {
            space: base_space,
            n,
            kr_dim_base: t.m,
            d0,
            j,
            gamma_fibre,
            chirality,
        },
        r,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DPrime {
    #[serde(rename = "D0")]
    D0,
    #[serde(rename = "Gamma D0")]
    GammaD0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JChoice {
    J,
    #[serde(rename = "Gamma J")]
    GammaJ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gamma0 {
    #[serde(rename = "gamma")]
    Chirality,
    #[serde(rename = "gamma Gamma")]
    ChiralityGamma,
    #[serde(rename = "Gamma")]
    Gamma,
}

/// One entry of the base real-structure tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRecipe {
    pub j: u8,
    pub n: u8,
    pub d0_prime: DPrime,
    pub j0: JChoice,
    pub gamma0: Option<Gamma0>,
    /// j₀² carries the opposite of the required sign.
    pub pathological: bool,
    /// D′₀ differs from the literal entry, which is inconsistent.
    pub amended: bool,
}

use DPrime::{GammaD0 as GD, D0 as D};
use JChoice::{GammaJ as GJ, J as JJ};

// rows: j/2 (even j) or (j-1)/2 (odd j); columns: n/2 or (n-1)/2
const EVEN_EVEN_J0: [[JChoice; 4]; 4] = [
    [JJ, GJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
    [JJ, GJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
];
const EVEN_EVEN_GAMMA0: [Gamma0; 4] = [
    Gamma0::Chirality,
    Gamma0::ChiralityGamma,
    Gamma0::Chirality,
    Gamma0::ChiralityGamma,
];
const EVEN_ODD_D: [[DPrime; 4]; 4] = [[D, D, D, D], [D, GD, GD, D], [D, D, D, D], [D, GD, GD, D]];
const EVEN_ODD_J0: [[JChoice; 4]; 4] = [
    [GJ, JJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
    [GJ, JJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
];
const ODD_EVEN_D: [DPrime; 4] = [D, GD, D, GD];
const ODD_EVEN_J0: [[JChoice; 4]; 4] = [
    [JJ, GJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
    [JJ, GJ, GJ, JJ],
    [JJ, JJ, GJ, GJ],
];
const ODD_ODD_D: [[DPrime; 4]; 4] = [[D, D, GD, GD], [D, D, D, D], [D, D, GD, GD], [D, D, D, D]];
const ODD_ODD_J0: [[JChoice; 4]; 4] = [
    [GJ, GJ, JJ, JJ],
    [JJ, GJ, GJ, JJ],
    [GJ, GJ, JJ, JJ],
    [JJ, GJ, GJ, JJ],
];

/// The literal recipe entry, without amendments.
pub fn literal_table_entry(j_mod8: u8, n_mod8: u8) -> Result<BaseRecipe> {
    if j_mod8 > 7 || n_mod8 > 7 {
        return Err(Error::InvalidArgument(format!(
            "residues must lie in 0..8, got ({j_mod8}, {n_mod8})"
        )));
    }
    let (row, col) = ((j_mod8 / 2) as usize, (n_mod8 / 2) as usize);
    let (d0_prime, j0, gamma0) = match (j_mod8 % 2, n_mod8 % 2) {
        (0, 0) => (D, EVEN_EVEN_J0[row][col], Some(EVEN_EVEN_GAMMA0[col])),
        (0, _) => (
            EVEN_ODD_D[row][col],
            EVEN_ODD_J0[row][col],
            Some(Gamma0::Gamma),
        ),
        (_, 0) => (ODD_EVEN_D[col], ODD_EVEN_J0[row][col], None),
        _ => (ODD_ODD_D[row][col], ODD_ODD_J0[row][col], None),
    };
    let pathological = matches!((j_mod8, n_mod8), (0, 3) | (0, 5) | (4, 3) | (4, 5));
    Ok(BaseRecipe {
        j: j_mod8,
        n: n_mod8,
        d0_prime,
        j0,
        gamma0,
        pathological,
        amended: false,
    })
}

/// D′₀, j₀, γ₀ for a base of KR-dimension j and fibre rank n (both mod 8).
///
/// In the odd-odd family the literal entries (3,3), (3,5), (7,3), (7,5) have
/// D′₀ = D₀, which cannot satisfy j₀D′₀ = ε′D′₀j₀ for either choice of
/// j₀; ΓD₀ is returned there and `amended` is set.
pub fn base_triple_recipe(j_mod8: u8, n_mod8: u8) -> Result<BaseRecipe> {
    let mut r = literal_table_entry(j_mod8, n_mod8)?;
    if matches!((j_mod8, n_mod8), (3, 3) | (3, 5) | (7, 3) | (7, 5)) {
        r.d0_prime = DPrime::GammaD0;
        r.amended = true;
    }
    Ok(r)
}

/// All 64 recipes, row-major in (j, n).
pub fn recipe_table() -> Vec<BaseRecipe> {
    (0..8u8)
        .flat_map(|j| (0..8u8).map(move |n| base_triple_recipe(j, n).expect("in range")))
        .collect()
}

/// D′₀, j₀ and γ₀ as operators on H₀.
#[derive(Clone, Debug)]
pub struct BaseOperators {
    pub d0_prime: LinearOperator,
    pub j0: LinearOperator,
    pub gamma0: Option<LinearOperator>,
}

pub fn apply_recipe(base: &BaseTriple, recipe: &BaseRecipe) -> Result<BaseOperators> {
    let g = &base.gamma_fibre;
    let d0_prime = match recipe.d0_prime {
        DPrime::D0 => base.d0.clone(),
        DPrime::GammaD0 => g.compose(&base.d0)?,
    };
    let j0 = match recipe.j0 {
        JChoice::J => base.j.clone(),
        JChoice::GammaJ => g.compose(&base.j)?,
    };
    let chirality = || {
        base.chirality.clone().ok_or_else(|| {
            Error::InvalidArgument("recipe needs a chirality but the total triple is odd".into())
        })
    };
    let gamma0 = match recipe.gamma0 {
        None => None,
        Some(Gamma0::Gamma) => Some(g.clone()),
        Some(Gamma0::Chirality) => Some(chirality()?),
        Some(Gamma0::ChiralityGamma) => Some(chirality()?.compose(g)?),
    };
    Ok(BaseOperators {
        d0_prime,
        j0,
        gamma0,
    })
}

/// KR relations of the base: j₀² = ε, j₀D′₀ = ε′D′₀j₀ and, for even j,
/// j₀γ₀ = ε″γ₀j₀ and γ₀D′₀ = −D′₀γ₀. For the pathological entries the
/// first relation is checked in its documented form j₀² = −ε.
pub fn verify_base_kr(
    base: &BaseTriple,
    recipe: &BaseRecipe,
    tolerance: f64,
) -> Result<VerificationReport> {
    let ops = apply_recipe(base, recipe)?;
    let signs = kr_signs(base.kr_dim_base);
    let mut r = VerificationReport::new(tolerance);
    let id = LinearOperator::identity(base.space);
    let j2 = ops.j0.compose(&ops.j0)?;
    let eps = f64::from(signs.eps);
    if recipe.pathological {
        r.record(
            "j0^2 = -eps(j) (documented wrong sign)",
            "wrong-sign base real structure",
            j2.interior_deviation(&id.scale_real(-eps), Some(0))?,
            0,
        );
    } else {
        r.record(
            "j0^2 = eps(j)",
            "base KR signs",
            j2.interior_deviation(&id.scale_real(eps), Some(0))?,
            0,
        );
    }
    let lhs = ops.j0.compose(&ops.d0_prime)?;
    let rhs = ops
        .d0_prime
        .compose(&ops.j0)?
        .scale_real(f64::from(signs.eps_prime));
    r.record(
        "j0 D0' = eps'(j) D0' j0",
        "base KR signs",
        lhs.interior_deviation(&rhs, Some(0))?,
        0,
    );
    if let (Some(g0), Some(e2)) = (&ops.gamma0, signs.eps_double_prime) {
        let lhs = ops.j0.compose(g0)?;
        let rhs = g0.compose(&ops.j0)?.scale_real(f64::from(e2));
        r.record(
            "j0 gamma0 = eps''(j) gamma0 j0",
            "base KR signs",
            lhs.interior_deviation(&rhs, Some(0))?,
            0,
        );
        let anti = LinearOperator::anticommutator(g0, &ops.d0_prime)?;
        r.record(
            "gamma0 D0' = -D0' gamma0",
            "base KR signs",
            anti.interior_norm(0),
            0,
        );
        r.record(
            "gamma0^2 = 1",
            "base grading",
            g0.compose(g0)?.interior_deviation(&id, Some(0))?,
            0,
        );
        r.record(
            "gamma0 selfadjoint",
            "base grading",
            g0.selfadjoint_deviation(),
            0,
        );
    }
    Ok(r)
}

/// Outcome of one (j, n) entry of the sweep.
#[derive(Clone, Debug)]
pub struct KrCase {
    pub recipe: BaseRecipe,
    pub module: SpinorModule,
    pub cutoff: u32,
    pub report: VerificationReport,
}

impl KrCase {
    pub fn pass(&self) -> bool {
        self.report.all_pass()
    }
}

/// Builds the flat triple over 𝕋^{j+n}_θ (random θ from `seed`), projects it
/// to H₀ and verifies the base KR relations for the (j, n) recipe.
pub fn kr_case(j: usize, n: usize, cutoff: u32, seed: u64, tolerance: f64) -> Result<KrCase> {
    let module = select_module(n, j)?;
    let theta = Arc::new(random_theta(j + n, &mut rng(seed)));
    let t = build_flat_triple_with(&theta, n, j, cutoff, module, None)?;
    let p = ProjectabilityData::flat(&t, 1.0, tolerance)?;
    let samples = Samples::generate(&theta, n, 1, 1, seed ^ 0x5eed);
    let mut report = VerificationReport::new(tolerance);
    report.extend_prefixed("fibres: ", check_isometric_fibres(&p, &samples, tolerance)?);
    let (base, restriction) = restrict_to_h0(&p, &samples, tolerance)?;
    report.extend_prefixed("H_0: ", restriction);
    let recipe = base_triple_recipe((j % 8) as u8, (n % 8) as u8)?;
    report.extend_prefixed("base: ", verify_base_kr(&base, &recipe, tolerance)?);
    Ok(KrCase {
        recipe,
        module,
        cutoff,
        report,
    })
}
