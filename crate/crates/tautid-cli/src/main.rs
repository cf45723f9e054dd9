//! `tautid` command-line front end. Every command prints one JSON document
//! (or JSON lines in batch mode) on stdout. Errors go to stderr as
//! `{"error": {"code": ..., "message": ...}}` with exit code 1 for domain
//! errors and 2 for usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use tautid::complexes::build_complex;
use tautid::dw::group::FiniteGroup;
use tautid::dw::heisenberg::dw_heisenberg;
use tautid::dw::{
    carry_cocycle, chain_map_c, cup_value, cyclic_three_cocycle, enumerate_homs, homogenize, verify_homogeneous,
    CheckScope, FormalSum,
};
use tautid::linking::{compare_routes, linking_form_cokernel, linking_form_kernel, gram_json, RouteMap, SeifertData};
use tautid::presentations::{
    branched_cover, brieskorn, check_tautness, lens, mapping_torus, seifert, seifert_mn, surgery, torus3,
    verify_identity, zero_surgery_cover, Identity, KnotData, MappingClassData, Partner, Presentation,
    SurgeryVariant, Tautness, TautnessOptions,
};
use tautid::{Alphabet, Error};

#[derive(Parser)]
#[command(name = "tautid", version, about = "3-manifold chain complexes from taut identities")]
struct Cli {
    /// Worker threads for batch and per-homomorphism work.
    #[arg(long, env = "TAUTID_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation, identity, boundary maps and diagonal of a family member.
    Complex {
        /// Also run the tautness search.
        #[arg(long, global = true)]
        tautness: bool,
        #[arg(long, global = true, default_value_t = 1_000_000)]
        budget: u64,
        #[command(subcommand)]
        family: Family,
    },
    /// Linking form of the d-fold cyclic branched cover.
    Linking(LinkingArgs),
    /// Dijkgraaf–Witten invariants.
    Dw {
        #[command(subcommand)]
        job: DwJob,
    },
    /// Tautness search for a family member.
    Tautness {
        #[arg(long, global = true, default_value_t = 1_000_000)]
        budget: u64,
        #[command(subcommand)]
        family: Family,
    },
    /// Enumerate homomorphisms into a finite group.
    Homs {
        /// cyclic:N, dihedral:N, symmetric:N, heisenberg:M, quaternion, a4, trivial, or a JSON table file.
        #[arg(long, global = true)]
        group: Option<String>,
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand, Clone)]
enum Family {
    /// Lens space L(p, q).
    Lens {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// The 3-torus.
    Torus3,
    /// Brieskorn manifold Σ(p, q, mpq + ε).
    Brieskorn {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
    },
    /// Seifert manifold with exponents a₁…a_{n+1} and signs ε₁…ε_n.
    Seifert {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eps: Vec<i64>,
    },
    /// M_{m,n} with relators x1^m(x1⁻¹x2⁻¹)^n, x2^m(x2⁻¹x1⁻¹)^n.
    SeifertMn {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
    /// Mapping torus of a surface automorphism given by generator images.
    MappingTorus {
        #[arg(long)]
        genus: usize,
        /// Comma-separated images of x1 … x2g; identity when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        images: Vec<String>,
    },
    /// p/1 or 1/q surgery, or the spliced sum with a partner knot.
    Surgery {
        #[arg(long)]
        knot: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "q")]
        p: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        /// Partner knot; `unknot` gives plain surgery.
        #[arg(long, default_value = "unknot")]
        partner: String,
    },
    /// d-fold cyclic branched cover of a knot.
    Cover {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        d: usize,
    },
    /// d-fold cyclic cover of 0-surgery on a knot.
    ZeroCover {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        d: usize,
    },
    /// Presentation and identity read from a JSON file.
    File { path: PathBuf },
}

#[derive(Args)]
struct LinkingArgs {
    /// Seifert matrix JSON: `[[..],..]` or `{"V": [[..],..]}`.
    #[arg(long, conflicts_with_all = ["knot", "pretzel", "batch"])]
    seifert: Option<PathBuf>,
    /// Built-in knot: trefoil or figure-eight.
    #[arg(long, conflicts_with_all = ["pretzel", "batch"])]
    knot: Option<String>,
    /// Odd pretzel parameters p,q,r.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "batch")]
    pretzel: Option<Vec<i64>>,
    /// JSON-lines file with one Seifert matrix per line.
    #[arg(long)]
    batch: Option<PathBuf>,
    #[arg(long)]
    fold: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Kernel)]
    route: RouteArg,
    /// Compute both routes and compare them; exit 1 on disagreement.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Kernel,
    Cokernel,
}

#[derive(Clone, Copy, ValueEnum)]
enum DwRoute {
    Cup,
    Homogeneous,
}

#[derive(Subcommand)]
enum DwJob {
    /// L(p, q) with G = A = ℤ/p.
    Lens {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, value_enum, default_value_t = DwRoute::Cup)]
        route: DwRoute,
    },
    /// M_{m,n} into the Heisenberg group of order m³.
    Heisenberg {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: i64,
    },
    /// Any presentation, group table and homogeneous or inhomogeneous 3-cocycle.
    Generic {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        group: String,
        #[arg(long)]
        cocycle: PathBuf,
        /// Coefficient modulus when the cocycle file is a bare array.
        #[arg(long)]
        modulus: Option<i64>,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
    /// A computed check did not hold; carries the partial report.
    Check(&'static str, String, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn knot(spec: &str) -> CliResult<KnotData> {
    Ok(match spec {
        "trefoil" => KnotData::trefoil(),
        "trefoil-normalized" => KnotData::trefoil_normalized(),
        "figure-eight" => KnotData::figure_eight(),
        "figure-eight-normalized" => KnotData::figure_eight_normalized(),
        path => KnotData::from_json(&read_json(Path::new(path))?)?,
    })
}

fn group(spec: &str) -> CliResult<FiniteGroup> {
    let param = |s: &str| -> CliResult<usize> {
        s.parse().map_err(|_| Failure::Usage(format!("bad group parameter in {spec:?}")))
    };
    if let Some((kind, n)) = spec.split_once(':') {
        let n = param(n)?;
        return Ok(match kind {
            "cyclic" if n >= 1 => FiniteGroup::cyclic(n),
            "dihedral" if n >= 2 => FiniteGroup::dihedral(n),
            "symmetric" if n >= 1 => FiniteGroup::symmetric(n),
            "heisenberg" => FiniteGroup::heisenberg(n)?,
            _ => return Err(Failure::Usage(format!("unknown group {spec:?}"))),
        });
    }
    match spec {
        "trivial" => Ok(FiniteGroup::trivial()),
        "quaternion" => Ok(FiniteGroup::quaternion()),
        "a4" => Ok(FiniteGroup::alternating4()),
        path => {
            let v = read_json(Path::new(path))?;
            let (table, labels) = match &v {
                Value::Array(_) => (v.clone(), None),
                Value::Object(o) => (
                    o.get("table").cloned().ok_or_else(|| Error::InvalidGroup("missing \"table\"".into()))?,
                    o.get("labels").cloned(),
                ),
                _ => return Err(Error::InvalidGroup("expected a table".into()).into()),
            };
            let table: Vec<Vec<usize>> =
                serde_json::from_value(table).map_err(|e| Error::InvalidGroup(format!("table: {e}")))?;
            let labels: Option<Vec<String>> = labels
                .map(serde_json::from_value)
                .transpose()
                .map_err(|e| Error::InvalidGroup(format!("labels: {e}")))?;
            Ok(FiniteGroup::from_table(table, labels)?)
        }
    }
}

/// `{"generators": [...], "relators": [...], "relator_names": [...]?, "identity": "..."}`.
fn presentation_file(path: &Path) -> CliResult<(Presentation, Identity)> {
    let v = read_json(path)?;
    let strings = |key: &str| -> CliResult<Option<Vec<String>>> {
        v.get(key)
            .map(|x| serde_json::from_value(x.clone()).map_err(|e| Failure::Domain(Error::Parse(format!("{key}: {e}")))))
            .transpose()
    };
    let gens = strings("generators")?.ok_or_else(|| Error::Parse("missing \"generators\"".into()))?;
    let rels = strings("relators")?.ok_or_else(|| Error::Parse("missing \"relators\"".into()))?;
    let alphabet = Alphabet::new(&gens)?;
    let words = rels.iter().map(|r| alphabet.parse_word(r)).collect::<tautid::Result<Vec<_>>>()?;
    let p = match strings("relator_names")? {
        Some(names) => Presentation::with_names(alphabet, words, names)?,
        None => Presentation::new(alphabet, words)?,
    };
    let id = v.get("identity").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing \"identity\"".into()))?;
    let w = p.pf_alphabet().parse_word(id)?;
    let s = Identity::from_pf_word(&p, &w)?;
    Ok((p, s))
}

fn build_family(f: &Family) -> CliResult<(Presentation, Identity)> {
    Ok(match f {
        Family::Lens { p, q } => lens(*p, *q)?,
        Family::Torus3 => torus3(),
        Family::Brieskorn { p, q, m, eps } => brieskorn(*p, *q, *m, *eps)?,
        Family::Seifert { a, eps } => seifert(a, eps)?,
        Family::SeifertMn { m, n } => seifert_mn(*m, *n)?,
        Family::MappingTorus { genus, images } => {
            let data = if images.is_empty() {
                MappingClassData::identity(*genus)
            } else {
                let ab = Alphabet::indexed("x", 2 * genus);
                let words = images.iter().map(|s| ab.parse_word(s.trim())).collect::<tautid::Result<Vec<_>>>()?;
                if words.len() != 2 * genus {
                    return Err(Failure::Usage(format!("expected {} images", 2 * genus)));
                }
                MappingClassData::new(*genus, words)?
            };
            mapping_torus(&data)?
        }
        Family::Surgery { knot: k, p, q, partner } => {
            let variant = match (p, q) {
                (Some(p), None) => SurgeryVariant::P(*p),
                (None, Some(q)) => SurgeryVariant::Q(*q),
                _ => return Err(Failure::Usage("exactly one of --p and --q is required".into())),
            };
            let partner = if partner == "unknot" { Partner::Unknot } else { Partner::Knot(knot(partner)?) };
            surgery(&knot(k)?, variant, &partner)?
        }
        Family::Cover { knot: k, d } => branched_cover(&knot(k)?, *d)?,
        Family::ZeroCover { knot: k, d } => zero_surgery_cover(&knot(k)?, *d)?,
        Family::File { path } => presentation_file(path)?,
    })
}

fn tautness_json(p: &Presentation, s: &Identity, budget: u64) -> CliResult<Value> {
    Ok(match check_tautness(p, s, None, TautnessOptions { budget })? {
        Tautness::Taut(pairing) => json!({
            "result": "taut",
            "edges": pairing.edges,
            "partner": pairing.partner,
        }),
        Tautness::NotTaut => json!({"result": "not_taut"}),
        Tautness::Unknown(why) => json!({"result": "unknown", "reason": why}),
    })
}

fn cmd_complex(family: &Family, tautness: bool, budget: u64) -> CliResult<Value> {
    let (p, s) = build_family(family)?;
    let verified = verify_identity(&p, &s)?;
    let ccd = build_complex(&p, &s)?;
    let mut out = ccd.to_json();
    out["verified"] = json!(verified);
    if tautness {
        out["tautness"] = tautness_json(&p, &s, budget)?;
    }
    Ok(out)
}

fn seifert_of(args: &LinkingArgs) -> CliResult<SeifertData> {
    if let Some(path) = &args.seifert {
        return Ok(SeifertData::from_json(&read_json(path)?)?);
    }
    if let Some(k) = &args.knot {
        return match k.as_str() {
            "trefoil" => Ok(SeifertData::trefoil()),
            "figure-eight" => Ok(SeifertData::figure_eight()),
            _ => Err(Failure::Usage(format!("unknown knot {k:?}"))),
        };
    }
    if let Some(pqr) = &args.pretzel {
        if pqr.len() != 3 {
            return Err(Failure::Usage("--pretzel takes p,q,r".into()));
        }
        return Ok(SeifertData::pretzel(pqr[0], pqr[1], pqr[2])?);
    }
    Err(Failure::Usage("one of --seifert, --knot, --pretzel or --batch is required".into()))
}

fn linking_one(s: &SeifertData, args: &LinkingArgs) -> CliResult<Value> {
    if args.fold < 2 {
        return Err(Error::InvalidParameter("fold must be at least 2".into()).into());
    }
    if !args.cross_check {
        let r = match args.route {
            RouteArg::Kernel => linking_form_kernel(s, args.fold)?,
            RouteArg::Cokernel => linking_form_cokernel(s, args.fold)?,
        };
        return Ok(r.to_json());
    }
    let kernel = linking_form_kernel(s, args.fold)?;
    let coker = linking_form_cokernel(s, args.fold)?;
    let composite = compare_routes(s, args.fold, RouteMap::AdjugateAfterB)?;
    let literal = compare_routes(s, args.fold, RouteMap::Adjugate)?;
    let out = json!({
        "kernel": kernel.to_json(),
        "cokernel": coker.to_json(),
        "comparison": {
            "map": "v -> adj(A) z with tB z = v mod tA",
            "transported_gram": gram_json(&composite.transported_gram),
            "agree": composite.agree,
            "adjugate_only_agrees": literal.agree,
        },
    });
    if !composite.agree {
        return Err(Failure::Check("route_disagreement", "kernel and cokernel routes disagree".into(), out));
    }
    Ok(out)
}

fn error_json(code: &str, message: &str) -> Value {
    json!({"error": {"code": code, "message": message}})
}

fn failure_json(f: &Failure) -> Value {
    match f {
        Failure::Domain(e) => error_json(e.code(), &e.to_string()),
        Failure::Usage(m) => error_json("usage", m),
        Failure::Check(code, m, partial) => {
            let mut v = error_json(code, m);
            v["report"] = partial.clone();
            v
        }
    }
}

/// JSON-lines batch; records are processed in parallel and printed in input order.
fn cmd_linking_batch(path: &Path, args: &LinkingArgs) -> CliResult<(String, bool)> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let lines: Vec<(usize, &str)> = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect();
    let results: Vec<(Value, bool)> = lines
        .par_iter()
        .map(|&(i, line)| {
            let parsed = serde_json::from_str::<Value>(line).map_err(|e| Failure::Domain(Error::Parse(e.to_string())));
            let name = parsed.as_ref().ok().and_then(|v| v.get("name").cloned()).unwrap_or(Value::Null);
            let r = parsed.and_then(|v| Ok(SeifertData::from_json(&v)?)).and_then(|s| linking_one(&s, args));
            match r {
                Ok(v) => (json!({"line": i + 1, "name": name, "result": v}), true),
                Err(f) => (json!({"line": i + 1, "name": name, "error": failure_json(&f)["error"]}), false),
            }
        })
        .collect();
    let ok = results.iter().all(|r| r.1);
    let out = results.iter().map(|r| r.0.to_string()).collect::<Vec<_>>().join("\n");
    Ok((out, ok))
}

struct Cocycle {
    modulus: i64,
    homogeneous: bool,
    values: Vec<i64>,
}

fn cocycle_file(path: &Path, order: usize, modulus: Option<i64>) -> CliResult<Cocycle> {
    let v = read_json(path)?;
    let (values, m, kind) = match &v {
        Value::Array(_) => (v.clone(), modulus, None),
        Value::Object(o) => (
            o.get("values").cloned().ok_or_else(|| Error::Parse("missing \"values\"".into()))?,
            o.get("modulus").and_then(Value::as_i64).or(modulus),
            o.get("kind").and_then(Value::as_str).map(str::to_string),
        ),
        _ => return Err(Error::Parse("cocycle must be an array or object".into()).into()),
    };
    let values: Vec<i64> = serde_json::from_value(values).map_err(|e| Error::Parse(format!("values: {e}")))?;
    let m = m.ok_or_else(|| Failure::Usage("cocycle modulus missing; pass --modulus".into()))?;
    if m < 1 {
        return Err(Error::InvalidParameter("modulus must be positive".into()).into());
    }
    let homogeneous = match kind.as_deref() {
        Some("homogeneous") => true,
        Some("inhomogeneous") => false,
        Some(k) => return Err(Error::Parse(format!("unknown cocycle kind {k:?}")).into()),
        None => values.len() == order.pow(4) && order > 1,
    };
    let expected = order.pow(if homogeneous { 4 } else { 3 });
    if values.len() != expected {
        return Err(Error::Dimension(format!("cocycle has {} values, expected {expected}", values.len())).into());
    }
    Ok(Cocycle { modulus: m, homogeneous, values })
}

fn dw_per_hom(
    p: &Presentation,
    s: &Identity,
    g: &FiniteGroup,
    modulus: i64,
    value: impl Fn(&tautid::complexes::ChainComplexData, &tautid::dw::Hom) -> tautid::Result<i64> + Sync,
) -> CliResult<Value> {
    let ccd = build_complex(p, s)?;
    let homs = enumerate_homs(p, g);
    let values = homs.par_iter().map(|h| value(&ccd, h)).collect::<tautid::Result<Vec<_>>>()?;
    Ok(json!({
        "homs": homs.len(),
        "modulus": modulus,
        "dw": FormalSum::from_values(modulus, values).to_json(),
    }))
}

fn cmd_dw(job: &DwJob) -> CliResult<Value> {
    match job {
        DwJob::Lens { p, q, route } => {
            let (pres, s) = lens(*p, *q)?;
            let n = *p as usize;
            let g = FiniteGroup::cyclic(n);
            let mut out = match route {
                DwRoute::Cup => dw_per_hom(&pres, &s, &g, *p, |ccd, h| {
                    cup_value(ccd, &g, h, |e| e as i64, carry_cocycle(n), *p)
                })?,
                DwRoute::Homogeneous => {
                    let psi = homogenize(&g, cyclic_three_cocycle(n));
                    dw_per_hom(&pres, &s, &g, *p, |ccd, h| {
                        Ok(chain_map_c(ccd, &g, h)?.fundamental.evaluate(&psi, *p))
                    })?
                }
            };
            out["p"] = json!(p);
            out["q"] = json!(q);
            out["route"] = json!(match route { DwRoute::Cup => "cup", DwRoute::Homogeneous => "homogeneous" });
            Ok(out)
        }
        DwJob::Heisenberg { m, n } => {
            let rep = dw_heisenberg(*m, *n)?;
            let mut out = rep.to_json();
            out["dw"] = rep.engine_sum().to_json();
            Ok(out)
        }
        DwJob::Generic { presentation, group: gs, cocycle, modulus } => {
            let (p, s) = presentation_file(presentation)?;
            let g = group(gs)?;
            let n = g.order();
            let c = cocycle_file(cocycle, n, *modulus)?;
            let m = c.modulus;
            let table = |t: &[usize]| c.values[tautid::dw::tuple_index(n, t)];
            let psi: Box<dyn Fn(&[usize]) -> i64 + Sync> =
                if c.homogeneous { Box::new(table) } else { Box::new(homogenize(&g, table)) };
            let scope = if n.pow(5) <= 5_000_000 { CheckScope::Full } else { CheckScope::Sampled(1_000_000) };
            if !verify_homogeneous(&g, 3, m, &psi, scope) {
                return Err(Error::UndefinedCochain("the cochain is not a normalized 3-cocycle".into()).into());
            }
            let mut out = dw_per_hom(&p, &s, &g, m, |ccd, h| Ok(chain_map_c(ccd, &g, h)?.fundamental.evaluate(&psi, m)))?;
            out["cocycle_check"] = json!(match scope { CheckScope::Full => "full", CheckScope::Sampled(_) => "sampled" });
            Ok(out)
        }
    }
}

fn cmd_homs(gs: &str, family: &Family) -> CliResult<Value> {
    let g = group(gs)?;
    let (p, _) = build_family(family)?;
    let homs = enumerate_homs(&p, &g);
    Ok(json!({
        "group_order": g.order(),
        "generators": p.alphabet.names(),
        "count": homs.len(),
        "homs": homs.iter().map(|h| h.images.clone()).collect::<Vec<_>>(),
    }))
}

fn run(cli: &Cli) -> CliResult<(String, bool)> {
    let single = |v: CliResult<Value>| v.map(|v| (serde_json::to_string_pretty(&v).expect("json"), true));
    match &cli.command {
        Command::Complex { tautness, budget, family } => single(cmd_complex(family, *tautness, *budget)),
        Command::Linking(args) => match &args.batch {
            Some(path) => cmd_linking_batch(path, args),
            None => single(seifert_of(args).and_then(|s| linking_one(&s, args))),
        },
        Command::Dw { job } => single(cmd_dw(job)),
        Command::Tautness { budget, family } => single(build_family(family).and_then(|(p, s)| tautness_json(&p, &s, *budget))),
        Command::Homs { group, family } => match group {
            Some(g) => single(cmd_homs(g, family)),
            None => Err(Failure::Usage("--group is required".into())),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("{}", error_json("usage", "could not configure the thread pool"));
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, ok)) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", failure_json(&f));
            ExitCode::from(if matches!(f, Failure::Usage(_)) { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }
}
