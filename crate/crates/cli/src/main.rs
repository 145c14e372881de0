use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockqsp::fockseq::parse_doubled;
use fockqsp::grothendieck::{check_iterated, check_iterated_seq, check_theorem_grid, IteratedReport};
use fockqsp::linkage::{canonicalize, linked, LinkageContext};
use fockqsp::operators::{apply, apply_sum_b, classify_index, eval_decomposition, project_embedded, FixedRule, OpKind, OperatorSpec, Qsp};
use fockqsp::relcheck::{check_qsp, check_typea, sample_pool, sample_pool_with_charge, SuiteReport};
use fockqsp::weights::{embed, shifted, stabilize};
use fockqsp::{Error, Family, Fock, LieType, ResidueClass, Sequence, Support, Weight};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fockqsp", version, about = "Fock space operators for affine quantum symmetric pairs")]
struct Cli {
    /// Aligned text instead of JSON
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// A, C, B_INT or B_HALF
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    ell: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    #[value(name = "B")]
    B,
    #[value(name = "L")]
    L,
    #[value(name = "Linv")]
    LInv,
    #[value(name = "E")]
    E,
    #[value(name = "F")]
    F,
    #[value(name = "K")]
    K,
    #[value(name = "Kinv")]
    KInv,
    #[value(name = "Bz")]
    BZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Standard,
    Nonstandard,
    AtZero,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply one operator to an embedded weight or a sequence
    Act {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum)]
        op: OpName,
        /// Residue class, e.g. 3/2
        #[arg(long)]
        pbar: String,
        /// Position read by Bz, e.g. -9/2
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "sequence")]
        weight: Option<String>,
        /// LEFT:BITS, e.g. -4:0101
        #[arg(long, allow_hyphen_values = true)]
        sequence: Option<String>,
    },
    /// Decompose the aggregate B action on a weight into weights at v = 1
    Decompose {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Include the Laurent coefficient of every summand
        #[arg(long)]
        coefficients: bool,
    },
    /// Decide whether two dominant weights are linked
    Linkage {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Check the defining relations on random sequences
    CheckRelations {
        /// Index lattice: H or Z
        #[arg(long)]
        index: String,
        #[arg(long)]
        modulus: i64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        width: usize,
        /// Form of B at fixed indices
        #[arg(long, value_enum, default_value = "standard")]
        fixed: Rule,
        /// Check the quantum affine relations instead
        #[arg(long)]
        type_a: bool,
    },
    /// Compare the operator sum with the tensor rule on all small weights
    CheckTheorems {
        #[command(flatten)]
        ty: TypeArgs,
        /// Bound on the first coordinate, e.g. 6 or 11/2
        #[arg(long)]
        max_coord: String,
    },
    /// Compare iterated operator sums with the iterated tensor rule
    CheckIterated {
        #[arg(long)]
        family: String,
        #[arg(long)]
        ell: i64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Start from this weight (needs --rank)
        #[arg(long, allow_hyphen_values = true, requires = "rank")]
        weight: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        /// Otherwise check this many random sequences
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        charge: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        width: usize,
    },
    /// Write a sequence as a shifted embedded weight
    Stabilize {
        #[arg(long)]
        family: String,
        #[arg(long)]
        ell: i64,
        /// LEFT:BITS
        #[arg(long, allow_hyphen_values = true)]
        sequence: String,
        #[arg(long, default_value_t = 0)]
        reserve: i64,
    },
    /// Classify the residue classes of H/rZ or Z/rZ
    Classify {
        #[arg(long)]
        index: String,
        #[arg(long)]
        modulus: i64,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<Value, Failure>;

fn lie_type(t: &TypeArgs) -> Result<LieType, Error> {
    let ty = LieType::new(Family::parse(&t.family)?, t.rank)?;
    check_ell(ty.family, t.ell)?;
    Ok(ty)
}

fn check_ell(family: Family, ell: i64) -> Result<(), Error> {
    if ell <= 3 || (family.is_b() && ell % 2 == 0 && ell / 2 <= 3) {
        return Err(Error::ModulusTooSmall(ell));
    }
    Ok(())
}

fn lattice(s: &str) -> Result<Support, Error> {
    match s {
        "H" | "h" => Ok(Support::Half),
        "Z" | "z" => Ok(Support::Int),
        _ => Err(Error::Parse(format!("index lattice must be H or Z, got {s:?}"))),
    }
}

fn parse_sequence(support: Support, s: &str) -> Result<Sequence, Error> {
    let (left, bits) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected LEFT:BITS, got {s:?}")))?;
    Sequence::from_bit_str(support, parse_doubled(left)?, bits)
}

fn integer(n: &num_bigint::BigInt) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal")
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn act(t: &TypeArgs, op: OpName, pbar: &str, z: Option<&str>, weight: Option<&str>, sequence: Option<&str>) -> Run {
    let ty = lie_type(t)?;
    let x: Fock = match (weight, sequence) {
        (Some(w), _) => Fock::basis(embed(ty, &Weight::parse(ty, w)?)?),
        (None, Some(s)) => Fock::basis(parse_sequence(ty.support(), s)?),
        (None, None) => return Err(Failure::Usage("one of --weight or --sequence is required".into())),
    };
    let affine = || -> Result<ResidueClass, Error> {
        let d = parse_doubled(pbar)?;
        if d.rem_euclid(2) != ty.support().dual().parity() {
            return Err(Error::SupportMismatch(format!("class {pbar} does not act on {} sequences", ty.support().name())));
        }
        Ok(ResidueClass::new(d, t.ell))
    };
    let spec = match op {
        OpName::E => OperatorSpec::new(OpKind::EHat, affine()?),
        OpName::F => OperatorSpec::new(OpKind::FHat, affine()?),
        OpName::K => OperatorSpec::new(OpKind::KHat, affine()?),
        OpName::KInv => OperatorSpec::new(OpKind::KHatInv, affine()?),
        OpName::B | OpName::L | OpName::LInv | OpName::BZ => {
            let q = Qsp::for_family(ty.family, t.ell)?;
            let p = q.class(parse_doubled(pbar)?)?;
            match op {
                OpName::B => q.b(p),
                OpName::L => q.l(p),
                OpName::LInv => OperatorSpec::new(OpKind::LHatInv, p),
                _ => {
                    let z = z.ok_or_else(|| Failure::Usage("Bz needs --z".into()))?;
                    OperatorSpec::b_z(q.modulus, parse_doubled(z)?)?
                }
            }
        }
    };
    Ok(to_json(&apply(&spec, &x)?))
}

fn decompose(t: &TypeArgs, weight: &str, coefficients: bool) -> Run {
    let ty = lie_type(t)?;
    let lambda = Weight::parse(ty, weight)?;
    let out = project_embedded(ty, &apply_sum_b(ty, t.ell, &lambda)?);
    let mults = eval_decomposition(&out, ty)?;
    let summands: Vec<Value> = mults.iter().map(|(w, m)| json!({"weight": to_json(w), "mult": integer(m)})).collect();
    let mut v = json!({ "summands": summands });
    if coefficients {
        let cs: Vec<Value> = out
            .terms()
            .filter_map(|(a, c)| fockqsp::weights::extract(ty, a).map(|w| json!({"weight": to_json(&w), "coefficient": to_json(c)})))
            .collect();
        v["coefficients"] = Value::Array(cs);
    }
    Ok(v)
}

fn linkage(t: &TypeArgs, lhs: &str, rhs: &str) -> Run {
    let ty = lie_type(t)?;
    let ctx = LinkageContext::new(ty, t.ell)?;
    let (a, b) = (Weight::parse(ty, lhs)?, Weight::parse(ty, rhs)?);
    let l = linked(&a, &b, &ctx)?;
    let (ca, _) = canonicalize(&shifted(&a), &ctx)?;
    let (cb, _) = canonicalize(&shifted(&b), &ctx)?;
    Ok(json!({ "linked": l, "lhs_alcove": ca.coord_strings(), "rhs_alcove": cb.coord_strings() }))
}

fn suite_result(rep: SuiteReport) -> Run {
    let v = to_json(&rep);
    if rep.passed() {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn check_relations(index: &str, modulus: i64, samples: usize, seed: u64, width: usize, fixed: Rule, type_a: bool) -> Run {
    let lat = lattice(index)?;
    let pool = sample_pool(lat.dual(), samples, width, seed);
    if type_a {
        return suite_result(check_typea(lat, modulus, &pool)?);
    }
    let rule = match fixed {
        Rule::Standard => FixedRule::AllStandard,
        Rule::Nonstandard => FixedRule::AllNonstandard,
        Rule::AtZero => FixedRule::NonstandardAtZero,
    };
    if modulus <= 3 {
        return Err(Error::ModulusTooSmall(modulus).into());
    }
    suite_result(check_qsp(&Qsp::new(modulus, lat, rule)?, &pool)?)
}

fn check_theorems(t: &TypeArgs, max_coord: &str) -> Run {
    let ty = lie_type(t)?;
    let rep = check_theorem_grid(ty, t.ell, parse_doubled(max_coord)?)?;
    let v = to_json(&rep);
    if rep.failures.is_empty() {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn iterated_json(r: &IteratedReport) -> Value {
    let mut v = to_json(r);
    if let Some(it) = &r.iterated {
        v["coefficients"] = to_json(&it.coefficients);
    }
    v
}

#[allow(clippy::too_many_arguments)]
fn check_iterated_cmd(
    family: &str,
    ell: i64,
    reps: usize,
    weight: Option<&str>,
    rank: Option<usize>,
    samples: usize,
    charge: i64,
    seed: u64,
    width: usize,
) -> Run {
    let family = Family::parse(family)?;
    check_ell(family, ell)?;
    let reports = match (weight, rank) {
        (Some(w), Some(n)) => {
            let ty = LieType::new(family, n)?;
            vec![check_iterated(ty, ell, &Weight::parse(ty, w)?, reps)?]
        }
        _ => sample_pool_with_charge(family.support(), samples, width, charge, seed)
            .iter()
            .map(|a| check_iterated_seq(family, ell, a, reps))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let pass = reports.iter().filter(|r| r.pass).count();
    let total = reports.len();
    let v = if weight.is_some() {
        iterated_json(&reports[0])
    } else {
        let failures: Vec<Value> = reports.iter().filter(|r| !r.pass).map(iterated_json).collect();
        json!({ "total": total, "pass": pass, "failures": failures })
    };
    if pass == total {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn stabilize_cmd(family: &str, ell: i64, sequence: &str, reserve: i64) -> Run {
    let family = Family::parse(family)?;
    check_ell(family, ell)?;
    let a = parse_sequence(family.support(), sequence)?;
    let (m, lambda) = stabilize(&a, reserve, ell, family)?;
    Ok(json!({ "m": m, "rank": lambda.rank(), "lambda": to_json(&lambda) }))
}

fn classify(index: &str, modulus: i64) -> Run {
    let lat = lattice(index)?;
    if modulus <= 3 {
        return Err(Error::ModulusTooSmall(modulus).into());
    }
    let classes: Vec<Value> = ResidueClass::all(lat, modulus)
        .into_iter()
        .map(|p| json!({ "class": to_json(&p), "kind": to_json(&classify_index(p)), "theta": to_json(&p.theta()) }))
        .collect();
    Ok(json!({ "modulus": modulus, "classes": classes }))
}

fn run(cli: &Cli) -> Run {
    match &cli.cmd {
        Cmd::Act { ty, op, pbar, z, weight, sequence } => act(ty, *op, pbar, z.as_deref(), weight.as_deref(), sequence.as_deref()),
        Cmd::Decompose { ty, weight, coefficients } => decompose(ty, weight, *coefficients),
        Cmd::Linkage { ty, lhs, rhs } => linkage(ty, lhs, rhs),
        Cmd::CheckRelations { index, modulus, samples, seed, width, fixed, type_a } => {
            check_relations(index, *modulus, *samples, *seed, *width, *fixed, *type_a)
        }
        Cmd::CheckTheorems { ty, max_coord } => check_theorems(ty, max_coord),
        Cmd::CheckIterated { family, ell, reps, weight, rank, samples, charge, seed, width } => {
            check_iterated_cmd(family, *ell, *reps, weight.as_deref(), *rank, *samples, *charge, *seed, *width)
        }
        Cmd::Stabilize { family, ell, sequence, reserve } => stabilize_cmd(family, *ell, sequence, *reserve),
        Cmd::Classify { index, modulus } => classify(index, *modulus),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let w = m.keys().map(|k| k.len()).max().unwrap_or(0);
            m.iter().map(|(k, x)| format!("{:w$}  {}\n", format!("{k}:"), scalar(x), w = w + 1)).collect()
        }
        other => format!("{}\n", scalar(other)),
    }
}

fn emit(v: &Value, as_human: bool) {
    if as_human {
        print!("{}", human(v));
    } else {
        println!("{}", serde_json::to_string(v).expect("json"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("FOCKQSP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    match run(&cli) {
        Ok(v) => {
            emit(&v, cli.human);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            emit(&v, cli.human);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
