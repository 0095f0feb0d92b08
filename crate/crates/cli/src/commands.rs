use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use strata_core::bubble_tree::{enumerate_with, EnumerationConfig};
use strata_core::cp2::{
    dim_checks, jump_line, phi, second_kind_pair, za_fixed, AlphaMatrix, Cp2DimCheck, Gaussian, Scalar, ZaFixed,
};
use strata_core::cyclotomic::cot_sum;
use strata_core::equivariant_s4::{
    congruence_witnesses, find_chain_with, single_level_admissible, S4Action, S4Triple, TerminalRule,
};
use strata_core::index::{dim_invariant_moduli, dim_s4_invariant, invariant_index, s4_index};
use strata_core::signature::{validate_bundle, BundleType, OrbifoldSignature, Singularity};
use strata_core::strata::{enumerate_o_trees, gluing_consistency_check, GluingReport, OBubbleTree, OTreeCaps};
use strata_core::{Error, Group, Rational, Result};

use crate::output::{point, Complex, Envelope, Residue, SCHEMA_VERSION};
use crate::{
    AustinArgs, BundleArgs, Command, Cp2Args, CotSumArgs, DimOrbifoldArgs, EnumerateOTreesArgs,
    EnumerateTreesArgs, GluingArgs, GroupArg, S4Args, SignatureArgs, TerminalArg,
};

pub fn run(command: &Command) -> Result<Value> {
    let name = command.name();
    match command {
        Command::DimOrbifold(a) => wrap(name, dim_orbifold(a)?),
        Command::DimS4(a) => wrap(name, dim_s4(a)?),
        Command::AustinCheck(a) => wrap(name, austin_check(a)?),
        Command::EnumerateTrees(a) => wrap(name, enumerate_trees(a)?),
        Command::EnumerateOTrees(a) => wrap(name, enumerate_o(a)?),
        Command::GluingCheck(a) => wrap(name, gluing_check(a)?),
        Command::Cp2Demo(a) => wrap(name, cp2_demo(a)?),
        Command::CotSum(a) => wrap(name, cot_sum_cmd(a)?),
    }
}

fn wrap<T: Serialize>(command: &'static str, body: T) -> Result<Value> {
    serde_json::to_value(Envelope { schema_version: SCHEMA_VERSION, command, body })
        .map_err(|e| Error::Validation(e.to_string()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Validation(format!("{} does not match the input schema: {e}", path.display())))
}

fn signature(args: &SignatureArgs) -> Result<OrbifoldSignature> {
    let singularities = args
        .sing
        .iter()
        .map(|s| {
            let (a, b) = s
                .split_once(':')
                .ok_or_else(|| Error::Validation(format!("singular point {s:?} is not of the form a:b")))?;
            let a = a.trim().parse().map_err(|_| Error::Validation(format!("bad order in {s:?}")))?;
            let b = b.trim().parse().map_err(|_| Error::Validation(format!("bad weight in {s:?}")))?;
            Ok(Singularity { a, b })
        })
        .collect::<Result<Vec<_>>>()?;
    let group = match args.group {
        GroupArg::Su2 => Group::Su2,
        GroupArg::So3 => Group::So3,
    };
    Ok(OrbifoldSignature { alpha: args.alpha, b2_plus: args.b2_plus, group, singularities })
}

fn bundle(args: &BundleArgs) -> Result<BundleType> {
    let charge = args.charge.ok_or_else(|| Error::Validation("--charge is required".into()))?;
    Ok(BundleType::new(charge, args.weights.clone()))
}

#[derive(Deserialize)]
struct BundleDocument {
    signature: OrbifoldSignature,
    bundle: BundleType,
}

fn signature_and_bundle(
    input: Option<&Path>,
    sig: &SignatureArgs,
    b: &BundleArgs,
) -> Result<(OrbifoldSignature, BundleType)> {
    match input {
        Some(path) => {
            let doc: BundleDocument = read_json(path)?;
            Ok((doc.signature, doc.bundle))
        }
        None => Ok((signature(sig)?, bundle(b)?)),
    }
}

#[derive(Serialize)]
struct SignatureOut {
    alpha: u64,
    b2_plus: u64,
    group: Group,
    singularities: Vec<Singularity>,
}

impl From<&OrbifoldSignature> for SignatureOut {
    fn from(s: &OrbifoldSignature) -> Self {
        SignatureOut { alpha: s.alpha, b2_plus: s.b2_plus, group: s.group, singularities: s.singularities.clone() }
    }
}

#[derive(Serialize)]
struct BundleOut {
    charge: i64,
    weights: Vec<Residue>,
}

fn bundle_out(sig: &OrbifoldSignature, b: &BundleType) -> BundleOut {
    BundleOut {
        charge: b.charge,
        weights: b.weights.iter().zip(&sig.singularities).map(|(&m, s)| Residue::new(m as i64, s.a)).collect(),
    }
}

#[derive(Serialize)]
struct DimOrbifoldOut {
    signature: SignatureOut,
    bundle: BundleOut,
    index: Rational,
    dimension: i64,
}

fn dim_orbifold(args: &DimOrbifoldArgs) -> Result<DimOrbifoldOut> {
    let (sig, b) = signature_and_bundle(args.input.as_deref(), &args.signature, &args.bundle)?;
    let index = invariant_index(&sig, &b)?;
    let dimension = dim_invariant_moduli(&sig, &b)?;
    Ok(DimOrbifoldOut { signature: (&sig).into(), bundle: bundle_out(&sig, &b), index, dimension })
}

#[derive(Serialize)]
struct TripleOut {
    p: u64,
    q: i64,
    k: u64,
    m: Residue,
    m_prime: Residue,
}

fn s4_data(args: &S4Args) -> Result<(S4Action, S4Triple, TripleOut)> {
    let action = S4Action::new(args.p, args.q)?;
    let t = S4Triple::new(&action, args.k, args.m, args.m_prime);
    let n = action.modulus();
    let out = TripleOut {
        p: action.p,
        q: action.q,
        k: t.k,
        m: Residue::new(t.m as i64, n),
        m_prime: Residue::new(t.m_prime as i64, n),
    };
    Ok((action, t, out))
}

#[derive(Serialize)]
struct DimS4Out {
    #[serde(flatten)]
    triple: TripleOut,
    index: Rational,
    dimension: i64,
    balanced_dimension: i64,
}

fn dim_s4(args: &S4Args) -> Result<DimS4Out> {
    let (action, t, triple) = s4_data(args)?;
    let dimension = dim_s4_invariant(&action, &t)?;
    Ok(DimS4Out { triple, index: s4_index(&action, &t)?, dimension, balanced_dimension: dimension - 1 })
}

#[derive(Serialize)]
struct LinkOut {
    k: u64,
    m: Residue,
    m_prime: Residue,
}

#[derive(Serialize)]
struct AustinOut {
    #[serde(flatten)]
    triple: TripleOut,
    terminal: TerminalRule,
    witnesses: Vec<[u64; 2]>,
    single_level: bool,
    exists: bool,
    chain: Option<Vec<LinkOut>>,
}

fn austin_check(args: &AustinArgs) -> Result<AustinOut> {
    let (action, t, triple) = s4_data(&args.triple)?;
    let terminal = match args.terminal {
        TerminalArg::MatchesMPrime => TerminalRule::MatchesMPrime,
        TerminalArg::Literal => TerminalRule::Literal,
    };
    let single_level = single_level_admissible(&action, &t)?;
    let n = action.modulus();
    let chain = find_chain_with(&action, &t, terminal)?.map(|c| {
        c.into_iter()
            .map(|l| LinkOut { k: l.k, m: Residue::new(l.m as i64, n), m_prime: Residue::new(l.m_prime as i64, n) })
            .collect::<Vec<_>>()
    });
    Ok(AustinOut {
        triple,
        terminal,
        witnesses: congruence_witnesses(&action, &t).into_iter().map(|(a, b)| [a, b]).collect(),
        single_level,
        exists: chain.is_some(),
        chain,
    })
}

#[derive(Serialize)]
struct TreesOut {
    k: u64,
    count: usize,
    trees: Vec<String>,
}

fn enumerate_trees(args: &EnumerateTreesArgs) -> Result<TreesOut> {
    let config = EnumerationConfig { max_trees: args.max_trees, ..EnumerationConfig::default() };
    let trees = enumerate_with(args.k, &config)?;
    Ok(TreesOut { k: args.k, count: trees.len(), trees })
}

#[derive(Serialize)]
struct OTreeOut {
    encoding: String,
    vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    stratum_dimension: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stratum_error: Option<String>,
    excluded: bool,
    extrapolated: bool,
    gluing_dimension: u32,
}

#[derive(Serialize)]
struct OTreesOut {
    signature: SignatureOut,
    bundle: BundleOut,
    depth_cap: usize,
    weight_cap: u64,
    count: usize,
    trees: Vec<OTreeOut>,
}

fn enumerate_o(args: &EnumerateOTreesArgs) -> Result<OTreesOut> {
    let (sig, b) = signature_and_bundle(args.input.as_deref(), &args.signature, &args.bundle)?;
    let caps = OTreeCaps { depth_cap: args.depth_cap, weight_cap: args.weight_cap, max_trees: args.max_trees };
    let trees = enumerate_o_trees(&sig, &b, caps)?;
    let trees: Vec<OTreeOut> = trees
        .iter()
        .map(|t| {
            let stratum = t.stratum_dimension();
            OTreeOut {
                encoding: t.encoding(),
                vertices: t.vertex_count(),
                stratum_dimension: stratum.as_ref().ok().map(|s| s.formal()),
                stratum_error: stratum.as_ref().err().map(ToString::to_string),
                excluded: t.is_excluded(),
                extrapolated: t.is_extrapolated(),
                gluing_dimension: t.gluing_dimension(),
            }
        })
        .collect();
    Ok(OTreesOut {
        signature: (&sig).into(),
        bundle: bundle_out(&sig, &b),
        depth_cap: caps.depth_cap,
        weight_cap: caps.weight_cap,
        count: trees.len(),
        trees,
    })
}

fn gluing_tree(args: &GluingArgs) -> Result<OBubbleTree> {
    if let Some(path) = &args.input {
        return read_json(path);
    }
    let sig = signature(&args.signature)?;
    let root = bundle(&args.bundle)?;
    validate_bundle(&sig, &root)?;
    let mut t = OBubbleTree::trivial(sig, root);
    match (args.free, &args.singular) {
        (Some(w), None) => {
            t.add_free(0, w);
        }
        (None, Some(arg)) => {
            let f: Vec<u64> = arg
                .split(':')
                .map(|x| x.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Validation(format!("--singular {arg:?} is not i:k:m_in:m_out")))?;
            let [i, k, m_in, m_out] = f[..] else {
                return Err(Error::Validation(format!("--singular {arg:?} is not i:k:m_in:m_out")));
            };
            t.add_singular(0, i as usize, k, m_in, m_out);
        }
        _ => return Err(Error::Validation("give exactly one of --free or --singular".into())),
    }
    Ok(t)
}

fn gluing_check(args: &GluingArgs) -> Result<GluingReport> {
    gluing_consistency_check(&gluing_tree(args)?)
}

#[derive(Serialize)]
struct Cp2Sample {
    alpha: [Vec<Complex>; 2],
    jump_line: Vec<Complex>,
    pair: [Vec<Complex>; 2],
    alpha_annihilates_jump_line: bool,
    pair_meets_at_jump_line: bool,
    round_trip_same_orbit: bool,
    fixed_locus: ZaFixed,
}

#[derive(Serialize)]
struct Cp2Out {
    seed: u64,
    a: u64,
    samples: Vec<Cp2Sample>,
    dimensions: Vec<Cp2DimCheck>,
}

fn cp2_demo(args: &Cp2Args) -> Result<Cp2Out> {
    if args.samples == 0 || args.samples > 10_000 {
        return Err(Error::Validation("--samples must be between 1 and 10000".into()));
    }
    if args.a < 2 {
        return Err(Error::Validation("--a must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut samples = Vec::new();
    while samples.len() < args.samples {
        let mut e = || (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let Ok(alpha) = AlphaMatrix::<Gaussian>::from_integers([[e(), e(), e()], [e(), e(), e()]]) else {
            continue;
        };
        let z = jump_line(&alpha)?;
        let pair = second_kind_pair(&alpha)?;
        let back = phi(&pair)?;
        samples.push(Cp2Sample {
            alpha: alpha.rows.clone().map(|r| r.iter().map(Complex::from).collect()),
            jump_line: point(&z),
            pair: [point(&pair.u), point(&pair.v)],
            alpha_annihilates_jump_line: alpha.apply(z.coords()).iter().all(|x| x.negligible(0.0)),
            pair_meets_at_jump_line: pair.intersection().same_as(&z),
            round_trip_same_orbit: back.same_orbit(&alpha),
            fixed_locus: za_fixed(&pair, args.a)?,
        });
    }
    Ok(Cp2Out { seed: args.seed, a: args.a, samples, dimensions: dim_checks() })
}

#[derive(Serialize)]
struct CotSumOut {
    a: i64,
    b: Residue,
    m: Residue,
    value: Rational,
}

fn cot_sum_cmd(args: &CotSumArgs) -> Result<CotSumOut> {
    let value = cot_sum(args.a, args.b, args.m)?;
    let a = args.a as u64;
    Ok(CotSumOut { a: args.a, b: Residue::new(args.b, a), m: Residue::new(args.m, a), value })
}
