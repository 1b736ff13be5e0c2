use std::fmt;

use inertia_core::abelian::{Endo, FgAbGroup, GroupElement, Subgroup};
use inertia_core::entropy::{
    ent_fg, ent_rational, h_alg_fg, h_alg_stabilized, h_alg_yuzvinski, h_top_shift, intrinsic_adjoint_entropy,
    intrinsic_entropy, limit_free_h, limit_free_shift, scale_over_family, sumset_growth, sumset_growth_shift,
    classify_growth, classify_growth_fg, EntropyReport, StabilizationConfig, SumsetGrowth,
};
use inertia_core::fully_inert::{
    box_decompose_fully_inert, classify_self_inert, commensurable_fully_invariant, free_profile,
    is_fully_inert, is_fully_inert_rational, is_uniformly_fully_inert, rational_profile, refuting_endomorphism,
    FullyInertProfile, GroupDescriptor,
};
use inertia_core::inertia::{
    find_witness, inert_index, is_inertial_endomorphism_with, is_inertial_rational, strict_inert_index,
    InertialCertificate, RationalInertialCertificate, WITNESS_HEIGHT,
};
use inertia_core::mahler::{
    kronecker_test, mahler_measure_with, remove_cyclotomic_factors, small_measure_scan, MahlerConfig, RootSchedule,
};
use inertia_core::model::SubgroupLattice;
use inertia_core::models::{
    finite_group_trajectory, finite_inert_index, minimal_transversal_count, BernoulliShift, CylinderFamily,
    FiniteEndo, FiniteGroup, ShiftElement, ShiftGroup,
};
use inertia_core::poly::IntPolynomial;
use inertia_core::rational::{RationalEndo, RationalLattice, RationalSpace};
use inertia_core::{Error, Index};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::output::{self, int};
use crate::parse::{self, Ambient, ParseError};
use crate::{
    Cli, Command, EndoInput, EntropyCmd, FullyInertCmd, GroupCmd, GrowthCmd, InertCmd, MahlerCmd, NonabelianCmd,
    Schedule, SessionConfig, SubCmd, TwoSubs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Out = Result<Value, CliError>;

pub fn run(cli: &Cli) -> Out {
    let s = &cli.session;
    match &cli.command {
        Command::Group(GroupCmd::Canon { group }) => match parse::ambient(group)? {
            Ambient::Fg(g) => Ok(json!({ "group": output::group(&g) })),
            Ambient::Rational(n) => Ok(json!({ "group": { "display": format!("Q^{n}"), "rational_dim": int(n) } })),
        },
        Command::Sub(c) => sub(c),
        Command::Inert(c) => inert(c),
        Command::Fullyinert(c) => fully_inert(c),
        Command::Entropy(c) => entropy(c, s),
        Command::Growth(c) => growth(c, s),
        Command::Mahler(c) => mahler(c, s),
        Command::Nonabelian(c) => nonabelian(c, s),
    }
}

fn stab(s: &SessionConfig) -> StabilizationConfig {
    StabilizationConfig { window: s.stabilization_window, max_steps: s.max_steps }
}

fn mahler_cfg(s: &SessionConfig, schedule: Schedule) -> MahlerConfig {
    let schedule = match schedule {
        Schedule::Aberth => RootSchedule::AberthCircle,
        Schedule::Weierstrass => RootSchedule::WeierstrassSpiral,
    };
    MahlerConfig { tol: s.tolerance, schedule, ..MahlerConfig::default() }
}

fn ambient_or_rational(src: Option<&str>, dim: usize) -> Result<Ambient, CliError> {
    match src {
        Some(g) => Ok(parse::ambient(g)?),
        None => Ok(Ambient::Rational(dim)),
    }
}

fn endo(a: &FgAbGroup, src: &str) -> Result<Endo, CliError> {
    let m = parse::integer_matrix(src)?;
    Ok(Endo::new(a, m)?)
}

fn rational_endo(src: &str) -> Result<RationalEndo, CliError> {
    Ok(RationalEndo::new(parse::rational_matrix(src)?)?)
}

fn subgroup(a: &FgAbGroup, src: &str) -> Result<Subgroup, CliError> {
    Ok(Subgroup::from_rows(a, &parse::integer_rows(src, a.dim())?)?)
}

fn lattice(n: usize, src: &str) -> Result<RationalLattice, CliError> {
    Ok(RationalLattice::from_generators(n, &parse::rational_rows(src, n)?)?)
}

fn matrix_dim(src: &str) -> Result<usize, CliError> {
    Ok(parse::rational_matrix(src)?.len())
}

fn sub(c: &SubCmd) -> Out {
    let (op, args): (&str, &TwoSubs) = match c {
        SubCmd::Index(a) => ("index", a),
        SubCmd::Sum(a) => ("sum", a),
        SubCmd::Meet(a) => ("meet", a),
    };
    match parse::ambient(&args.group)? {
        Ambient::Fg(g) => {
            let (h, k) = (subgroup(&g, &args.sub)?, subgroup(&g, &args.other)?);
            Ok(match op {
                "index" => json!({ "index": output::index(&g.relative_index(&h, &k)?) }),
                "sum" => json!({ "subgroup": output::subgroup(&g.sum(&h, &k)?) }),
                _ => json!({ "subgroup": output::subgroup(&g.intersect(&h, &k)?) }),
            })
        }
        Ambient::Rational(n) => {
            let space = RationalSpace::new(n);
            let (h, k) = (lattice(n, &args.sub)?, lattice(n, &args.other)?);
            Ok(match op {
                "index" => json!({ "index": output::index(&space.relative_index(&h, &k)?) }),
                "sum" => json!({ "lattice": output::rational_lattice(&space.sum(&h, &k)?) }),
                _ => json!({ "lattice": output::rational_lattice(&space.intersect(&h, &k)?) }),
            })
        }
    }
}

fn certificate(c: &InertialCertificate) -> Value {
    match c {
        InertialCertificate::MultiplicationInteger { m, a0 } => json!({
            "inertial": true,
            "kind": "multiplication_integer",
            "m": int(m),
            "a0": output::subgroup(a0),
        }),
        InertialCertificate::NonInertialWitness { witness, strict_index } => json!({
            "inertial": false,
            "kind": "non_inertial_witness",
            "witness": output::subgroup(witness),
            "strict_index": output::index(strict_index),
        }),
    }
}

fn inert(c: &InertCmd) -> Out {
    match c {
        InertCmd::Check { group, matrix, sub } => {
            let (v, strict) = match parse::ambient(group)? {
                Ambient::Fg(g) => {
                    let phi = endo(&g, matrix)?;
                    let h = subgroup(&g, sub)?;
                    (inert_index(&phi, &h)?, strict_inert_index(&phi, &h)?)
                }
                Ambient::Rational(n) => {
                    let phi = rational_endo(matrix)?;
                    let h = lattice(n, sub)?;
                    (inert_index(&phi, &h)?, strict_inert_index(&phi, &h)?)
                }
            };
            Ok(json!({ "inert": v.inert, "index": output::index(&v.index), "strict_index": output::index(&strict) }))
        }
        InertCmd::Endo { group, matrix } => match parse::ambient(group)? {
            Ambient::Fg(g) => Ok(certificate(&is_inertial_endomorphism_with(&endo(&g, matrix)?, WITNESS_HEIGHT)?)),
            Ambient::Rational(_) => Ok(match is_inertial_rational(&rational_endo(matrix)?)? {
                RationalInertialCertificate::MultiplicationRational { q } => json!({
                    "inertial": true,
                    "kind": "multiplication_rational",
                    "q": q.to_string(),
                }),
                RationalInertialCertificate::NonInertialWitness { witness, strict_index } => json!({
                    "inertial": false,
                    "kind": "non_inertial_witness",
                    "witness": output::rational_lattice(&witness),
                    "strict_index": output::index(&strict_index),
                }),
            }),
        },
        InertCmd::Witness { group, matrix, height } => match parse::ambient(group)? {
            Ambient::Fg(g) => {
                let w = find_witness(&endo(&g, matrix)?, *height)?;
                Ok(json!({ "height": int(height), "witness": w.as_ref().map(certificate) }))
            }
            Ambient::Rational(_) => Err(Error::UnsupportedAmbient("witness search runs on f.g. groups".into()).into()),
        },
    }
}

fn profile(p: &FullyInertProfile) -> Value {
    json!({
        "fully_invariant": p.fully_invariant,
        "commensurable_with_fully_invariant": p.commensurable_with_fully_invariant,
        "uniformly_fully_inert": p.uniformly_fully_inert,
        "fully_inert": p.fully_inert,
        "respects_chain": p.respects_chain(),
    })
}

fn fully_inert(c: &FullyInertCmd) -> Out {
    match c {
        FullyInertCmd::Check { group, sub, factors, threshold } => match parse::ambient(group)? {
            Ambient::Fg(g) => {
                let h = subgroup(&g, sub)?;
                let mut out = json!({ "fully_inert": is_fully_inert(&h)? });
                if g.is_free() {
                    out["profile"] = profile(&free_profile(&h)?);
                    out["commensurable_fully_invariant"] = match commensurable_fully_invariant(&h)? {
                        Some(n) => json!({ "n": int(n) }),
                        None => Value::Null,
                    };
                    out["refuting_endomorphism"] = match refuting_endomorphism(&h)? {
                        Some(e) => output::int_matrix(e.matrix()),
                        None => Value::Null,
                    };
                }
                if let Some(f) = factors {
                    let ranks: Result<Vec<usize>, CliError> = parse::integer_list("factors", f)?
                        .iter()
                        .map(|r| r.to_usize().ok_or_else(|| CliError::Usage(format!("bad factor rank {r}"))))
                        .collect();
                    let b = box_decompose_fully_inert(&h, &ranks?)?;
                    out["box"] = json!({
                        "parts": b.parts.iter().map(output::subgroup).collect::<Vec<_>>(),
                        "part_fully_inert": b.part_fully_inert,
                        "h_star": output::subgroup(&b.h_star),
                        "defect": output::index(&b.defect),
                        "fully_inert": b.fully_inert,
                        "witness": b.witness.as_ref().map(|e| output::int_matrix(e.matrix())),
                    });
                }
                Ok(out)
            }
            Ambient::Rational(n) => {
                let h = lattice(n, sub)?;
                let u = is_uniformly_fully_inert(&h, *threshold)?;
                Ok(json!({
                    "fully_inert": is_fully_inert_rational(&h),
                    "profile": profile(&rational_profile(&h)),
                    "uniform": {
                        "uniform": u.uniform,
                        "witness": u.witness.map(|w| json!({
                            "phi": output::rational_endo(&w.phi),
                            "power": int(w.power),
                            "index": int(&w.index),
                        })),
                    },
                }))
            }
        },
        FullyInertCmd::Classify { descriptor } => {
            let d: GroupDescriptor = serde_json::from_str(descriptor).map_err(|e| ParseError {
                what: "descriptor",
                input: descriptor.clone(),
                pos: descriptor_offset(descriptor, e.line(), e.column()),
                msg: e.to_string(),
            })?;
            let v = classify_self_inert(&d)?;
            Ok(serde_json::to_value(v).expect("verdict serializes"))
        }
    }
}

/// Character offset of a 1-based line and column.
fn descriptor_offset(src: &str, line: usize, column: usize) -> usize {
    let before: usize = src.lines().take(line.saturating_sub(1)).map(|l| l.chars().count() + 1).sum();
    before + column.saturating_sub(1)
}

fn shift_for(cell: &str) -> Result<BernoulliShift, CliError> {
    Ok(BernoulliShift::new(ShiftGroup::new(parse::finite_cell(cell)?)?))
}

/// Rows `[position, coords...]` as shift elements.
fn shift_elements(g: &ShiftGroup, src: &str) -> Result<Vec<ShiftElement>, CliError> {
    let rows = parse::integer_rows(src, 1 + g.cell().dim())?;
    rows.into_iter()
        .map(|r| {
            let pos = r[0].to_usize().ok_or_else(|| CliError::Usage(format!("bad position {}", r[0])))?;
            Ok(g.element(&[(pos, r[1..].to_vec())])?)
        })
        .collect()
}

fn entropy(c: &EntropyCmd, s: &SessionConfig) -> Out {
    let cfg = stab(s);
    let report: EntropyReport = match c {
        EntropyCmd::Ent(input) => match input_kind(input)? {
            Input::Shift(beta) => h_alg_stabilized(&beta, &beta.group().coordinate_copy(0), &cfg)?,
            Input::Fg(phi) => ent_fg(&phi, &cfg)?,
            Input::Rational(phi) => ent_rational(&phi, &cfg)?,
        },
        EntropyCmd::Halg(input) => match input_kind(input)? {
            Input::Shift(beta) => h_alg_stabilized(&beta, &beta.group().coordinate_copy(0), &cfg)?,
            Input::Fg(phi) => h_alg_fg(&phi, &mahler_cfg(s, Schedule::Aberth))?,
            Input::Rational(phi) => h_alg_yuzvinski(&phi, &mahler_cfg(s, Schedule::Aberth))?,
        },
        EntropyCmd::Intrinsic { matrix, cross_check } => {
            intrinsic_entropy(&rational_endo(matrix)?, cross_check.then_some(&cfg))?
        }
        EntropyCmd::Adjoint { matrix, group, sub } => match ambient_or_rational(group.as_deref(), matrix_dim(matrix)?)? {
            Ambient::Fg(g) => {
                let phi = endo(&g, matrix)?;
                let h = match sub {
                    Some(src) => subgroup(&g, src)?,
                    None => Subgroup::whole(&g),
                };
                intrinsic_adjoint_entropy(&phi, &h, &cfg)?
            }
            Ambient::Rational(n) => {
                let phi = rational_endo(matrix)?;
                let h = match sub {
                    Some(src) => lattice(n, src)?,
                    None => RationalLattice::standard(n),
                };
                intrinsic_adjoint_entropy(&phi, &h, &cfg)?
            }
        },
        EntropyCmd::Limitfree { input, sub } => match input_kind(input)? {
            Input::Shift(beta) => {
                let f = match sub {
                    Some(src) => beta.group().subgroup(&shift_elements(beta.group(), src)?),
                    None => beta.group().coordinate_copy(0),
                };
                limit_free_shift(&beta, &f)?
            }
            Input::Fg(phi) => {
                let f = match sub {
                    Some(src) => subgroup(phi.ambient(), src)?,
                    None => Subgroup::torsion(phi.ambient()),
                };
                limit_free_h(&phi, &f, s.max_steps)?
            }
            Input::Rational(phi) => {
                let f = match sub {
                    Some(src) => lattice(phi.dim(), src)?,
                    None => RationalLattice::zero(phi.dim()),
                };
                limit_free_h(&phi, &f, s.max_steps)?
            }
        },
        EntropyCmd::Htop { cell } => h_top_shift(&CylinderFamily::one_sided(&parse::finite_cell(cell)?)?, &cfg)?,
        EntropyCmd::Scale { cell, k } => {
            let fam = CylinderFamily::two_sided(&parse::finite_cell(cell)?)?;
            let ks: Vec<usize> = (0..=*k).collect();
            let scale = scale_over_family(&fam, &ks)?;
            return Ok(json!({
                "scale": int(&scale),
                "value": { "log_of": scale.to_string() },
                "family": format!("U_0..U_{k}"),
                "family_relative": true,
            }));
        }
    };
    Ok(output::entropy(&report))
}

enum Input {
    Shift(BernoulliShift),
    Fg(Endo),
    Rational(RationalEndo),
}

fn input_kind(input: &EndoInput) -> Result<Input, CliError> {
    if let Some(cell) = &input.shift {
        return Ok(Input::Shift(shift_for(cell)?));
    }
    let matrix = input.matrix.as_deref().ok_or_else(|| CliError::Usage("--matrix or --shift is required".into()))?;
    match ambient_or_rational(input.group.as_deref(), matrix_dim(matrix)?)? {
        Ambient::Fg(g) => Ok(Input::Fg(endo(&g, matrix)?)),
        Ambient::Rational(n) => {
            let phi = rational_endo(matrix)?;
            if phi.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: phi.dim() }.into());
            }
            Ok(Input::Rational(phi))
        }
    }
}

fn sumset(g: &SumsetGrowth) -> Value {
    json!({
        "sizes": g.sizes.iter().map(int).collect::<Vec<_>>(),
        "subadditive": g.subadditive,
    })
}

fn growth(c: &GrowthCmd, s: &SessionConfig) -> Out {
    match c {
        GrowthCmd::Classify { matrix, group } => {
            let class = match ambient_or_rational(group.as_deref(), matrix_dim(matrix)?)? {
                Ambient::Fg(g) => classify_growth_fg(&endo(&g, matrix)?)?,
                Ambient::Rational(_) => classify_growth(&rational_endo(matrix)?),
            };
            Ok(json!({ "growth": serde_json::to_value(class).expect("growth class serializes") }))
        }
        GrowthCmd::Sumset { matrix, group, shift, set, n } => {
            let g = match (shift, matrix, group) {
                (Some(cell), _, _) => {
                    let beta = shift_for(cell)?;
                    let f = shift_elements(beta.group(), set)?;
                    sumset_growth_shift(&beta, &f, *n, s.element_cap)?
                }
                (None, Some(matrix), Some(group)) => match parse::ambient(group)? {
                    Ambient::Fg(a) => {
                        let phi = endo(&a, matrix)?;
                        let f: Result<Vec<GroupElement>, Error> = parse::integer_rows(set, a.dim())?
                            .into_iter()
                            .map(|r| GroupElement::new(&a, r))
                            .collect();
                        sumset_growth(&phi, &f?, *n, s.element_cap)?
                    }
                    Ambient::Rational(_) => {
                        return Err(Error::UnsupportedAmbient("sumsets run on f.g. groups and shifts".into()).into())
                    }
                },
                _ => return Err(CliError::Usage("--matrix with --group, or --shift, is required".into())),
            };
            Ok(sumset(&g))
        }
    }
}

fn mahler(c: &MahlerCmd, s: &SessionConfig) -> Out {
    match c {
        MahlerCmd::Measure { poly, schedule } => {
            let f = IntPolynomial::new(parse::integer_list("polynomial", poly)?);
            let m = mahler_measure_with(&f, &mahler_cfg(s, *schedule))?;
            Ok(output::mahler(&f, &m))
        }
        MahlerCmd::Kronecker { poly } => {
            let f = IntPolynomial::new(parse::integer_list("polynomial", poly)?);
            if f.is_zero() {
                return Err(Error::ZeroPolynomial.into());
            }
            let (factors, rest) = remove_cyclotomic_factors(&f);
            Ok(json!({
                "polynomial": output::poly(&f),
                "kronecker": kronecker_test(&f),
                "cyclotomic_factors": factors
                    .iter()
                    .map(|(n, e)| json!({ "order": int(n), "multiplicity": int(e) }))
                    .collect::<Vec<_>>(),
                "cofactor": output::poly(&rest),
            }))
        }
        MahlerCmd::Scan { degree, height, threshold } => {
            let found = small_measure_scan(*degree, *height, *threshold, &mahler_cfg(s, Schedule::Aberth))?;
            Ok(json!({
                "threshold": threshold,
                "count": int(found.len()),
                "polynomials": found.iter().map(|(f, m)| output::mahler(f, m)).collect::<Vec<_>>(),
            }))
        }
    }
}

fn named_group(src: &str) -> Result<FiniteGroup, CliError> {
    let bad = |msg: String| CliError::Parse(ParseError { what: "group", input: src.into(), pos: 0, msg });
    let t = src.trim();
    if t.starts_with('{') {
        #[derive(serde::Deserialize)]
        struct Table {
            table: Vec<Vec<usize>>,
        }
        let tb: Table = serde_json::from_str(t).map_err(|e| bad(e.to_string()))?;
        return Ok(FiniteGroup::from_table(tb.table)?);
    }
    let (name, arg) = match t.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let n = match arg {
        Some(a) => Some(a.trim().parse::<usize>().map_err(|_| bad(format!("bad size `{a}`")))?),
        None => None,
    };
    let need = |n: Option<usize>, min: usize| -> Result<usize, CliError> {
        match n {
            Some(n) if n >= min => Ok(n),
            _ => Err(bad(format!("`{name}` needs a size of at least {min}"))),
        }
    };
    Ok(match name {
        "cyclic" => FiniteGroup::cyclic(need(n, 1)?),
        "dihedral" => FiniteGroup::dihedral(need(n, 1)?),
        "dicyclic" => FiniteGroup::dicyclic(need(n, 1)?),
        "symmetric" => FiniteGroup::symmetric(need(n, 1)?),
        "a4" => FiniteGroup::alternating4(),
        "sl2_3" => FiniteGroup::sl2_3(),
        _ => return Err(bad(format!("unknown group `{name}`"))),
    })
}

fn finite_endo(g: &FiniteGroup, src: &str) -> Result<FiniteEndo, CliError> {
    let t = src.trim();
    if t == "identity" {
        return Ok(FiniteEndo::identity(g));
    }
    let element = |x: &BigInt| -> Result<usize, CliError> {
        x.to_usize()
            .filter(|&x| x < g.order())
            .ok_or_else(|| CliError::Usage(format!("element {x} is outside 0..{}", g.order())))
    };
    if let Some(c) = t.strip_prefix("conj:") {
        let c = parse::integer_list("conjugator", c)?;
        if c.len() != 1 {
            return Err(CliError::Usage("conj: takes one element".into()));
        }
        return Ok(FiniteEndo::conjugation(g, element(&c[0])?));
    }
    let map: Result<Vec<usize>, CliError> = parse::integer_list("map", t)?.iter().map(element).collect();
    Ok(FiniteEndo::new(g, map?)?)
}

fn nonabelian(c: &NonabelianCmd, s: &SessionConfig) -> Out {
    let NonabelianCmd::Traj { group, phi, sub, n } = c;
    let g = named_group(group)?;
    if g.order() > s.element_cap {
        return Err(Error::CapExceeded { cap: s.element_cap }.into());
    }
    let phi = finite_endo(&g, phi)?;
    let gens: Result<Vec<usize>, CliError> = parse::integer_list("subgroup", sub)?
        .iter()
        .map(|x| x.to_usize().filter(|&x| x < g.order()).ok_or_else(|| CliError::Usage(format!("bad element {x}"))))
        .collect();
    let h = g.generate(&gens?);
    let t = match finite_inert_index(&g, &h, &phi) {
        Index::Finite(t) => t,
        Index::Infinite => unreachable!("finite groups have finite indices"),
    };
    let mut steps = Vec::new();
    let mut sup = 0f64;
    for k in 0..=*n {
        let tk = minimal_transversal_count(&g, &h, &finite_group_trajectory(&g, &phi, &h, k));
        let bound = t.pow(k as u32);
        if k > 0 {
            sup = sup.max((tk as f64).ln() / k as f64);
        }
        steps.push(json!({
            "n": int(k),
            "t_n": int(tk),
            "bound": int(&bound),
            "within_bound": BigInt::from(tk) <= bound,
            "running_sup_log_ratio": sup,
        }));
    }
    Ok(json!({
        "order": int(g.order()),
        "subgroup_order": int(h.len()),
        "t": int(&t),
        "steps": steps,
        "all_within_bound": steps.iter().all(|v| v["within_bound"] == Value::Bool(true)),
        "trivial_bound": t.is_one(),
    }))
}
