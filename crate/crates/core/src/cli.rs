//! Command-line front end. [`run`] does all the work and returns what to
//! print; the binary only forwards it.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::SpaceId;
use crate::freelie::{hall_basis, multidegree_census, GeneratorSpec};
use crate::hyperbolicity::{
    certify_catalog_space, growth_profile, k_detection_certificate, retract_catalog,
    wedge_summand_census, CertificationOutcome, HyperError, HypothesisFailure, RetractLookup,
};
use crate::ktheory::{
    builtin_wedge_degrees, catalog_kmodel, lambda_exponent, InputMode, KTheoryError, ModPMap,
};
use crate::numtheory::{is_prime, poincare_polynomial, witt};
use crate::oracles::{verify_oracles, Scope};
use crate::output::CertificateDocument;
use crate::stems::{detector_class, stable_summand_stem, StemWitness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;

/// What a CLI invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn malformed(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_MALFORMED,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }

    fn hypothesis(reason: impl Serialize, message: String) -> Self {
        #[derive(Serialize)]
        struct Failure<R> {
            status: &'static str,
            #[serde(flatten)]
            reason: R,
            message: String,
        }
        let body = Failure {
            status: "hypothesis_failure",
            reason,
            message: message.clone(),
        };
        Self {
            code: EXIT_HYPOTHESIS,
            stdout: serde_json::to_string(&body).unwrap() + "\n",
            stderr: format!("hypothesis failure: {message}\n"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "phyper", version, about = "Torsion growth certificates for wedges of spheres and suspensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Numtheory,
    Freelie,
    Stems,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    KTheory,
    Cohomology,
}

fn positive() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(1..)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Witt number W_n(k)
    Witt {
        #[arg(long, value_parser = positive())]
        n: u64,
        #[arg(long, value_parser = positive())]
        k: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Basic products of weight k
    Hall {
        /// number of degree-1 generators
        #[arg(long, value_parser = positive(), conflicts_with = "degrees")]
        n: Option<u64>,
        /// generator degrees, e.g. 1,2
        #[arg(long, value_delimiter = ',', value_parser = positive())]
        degrees: Option<Vec<u64>>,
        #[arg(long, value_parser = positive())]
        k: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// A stable stem carrying a Z/p^r summand, or an e-invariant detector class
    Stems {
        #[arg(long, value_parser = positive())]
        p: u64,
        #[arg(long, value_parser = positive(), required_unless_present = "detector", conflicts_with = "detector")]
        r: Option<u64>,
        /// index j of the detector class f_{p,j}
        #[arg(long, value_parser = positive())]
        detector: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Z/p^r summands of a wedge of two spheres
    WedgeCensus(WedgeArgs),
    /// p-hyperbolicity certificate for the suspension of a space
    Certify(CertifyArgs),
    /// Cohomology, K-theory model and retract data of a catalog space
    Catalog {
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the independent oracle suites
    VerifyOracles {
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct WedgeArgs {
    #[arg(long, value_parser = positive(), required_unless_present = "space", requires = "q2")]
    q1: Option<u64>,
    #[arg(long, value_parser = positive(), requires = "q1")]
    q2: Option<u64>,
    /// retract-catalog space or Wedge(a,b), instead of --q1/--q2
    #[arg(long, conflicts_with_all = ["q1", "q2"])]
    space: Option<String>,
    #[arg(long, value_parser = positive())]
    p: u64,
    #[arg(long, value_parser = positive(), default_value = "1")]
    r: u64,
    #[arg(long, value_parser = positive())]
    kmax: u64,
    /// append the cumulative growth profile
    #[arg(long)]
    profile: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    space: String,
    #[arg(long, value_parser = positive())]
    p: u64,
    #[arg(long, value_parser = positive())]
    kmax: u64,
    /// two rows over F_p, e.g. "1,0;0,1"
    #[arg(long, requires_all = ["q1", "q2"])]
    map_matrix: Option<String>,
    #[arg(long, value_parser = positive(), requires = "map_matrix")]
    q1: Option<u64>,
    #[arg(long, value_parser = positive(), requires = "map_matrix")]
    q2: Option<u64>,
    #[arg(long, value_enum, default_value = "k-theory", requires = "map_matrix")]
    input_mode: ModeArg,
    #[arg(long)]
    profile: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Parse `argv` (program name first) and execute.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(rendered)
                }
                _ => Outcome {
                    code: EXIT_MALFORMED,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match cli.command {
        Command::Witt { n, k, format } => cmd_witt(n, k, format),
        Command::Hall { n, degrees, k, format } => cmd_hall(n, degrees, k, format),
        Command::Stems { p, r, detector, format } => cmd_stems(p, r, detector, format),
        Command::WedgeCensus(args) => cmd_wedge(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Catalog { space, format } => cmd_catalog(&space, format),
        Command::VerifyOracles { scope, format } => cmd_oracles(scope, format),
    }
}

fn json_line(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn cmd_witt(n: u64, k: u64, format: Format) -> Outcome {
    let w = witt(n, k);
    Outcome::ok(match format {
        Format::Text => format!("{w}\n"),
        Format::Json => json_line(&json!({ "n": n, "k": k, "witt": w.to_string() })),
        Format::Csv => format!("n,k,witt\n{n},{k},{w}\n"),
    })
}

/// Weight ceiling for explicit enumeration on the command line.
const HALL_ENUMERATION_LIMIT: usize = 5_000_000;

fn cmd_hall(n: Option<u64>, degrees: Option<Vec<u64>>, k: u64, format: Format) -> Outcome {
    let degrees = match (n, degrees) {
        (_, Some(d)) => d,
        (Some(n), None) => vec![1; n as usize],
        (None, None) => return Outcome::malformed("give --n or --degrees"),
    };
    let spec = match GeneratorSpec::new(degrees) {
        Ok(s) => s,
        Err(e) => return Outcome::malformed(e),
    };
    let size = witt(spec.len() as u64, k);
    if size > HALL_ENUMERATION_LIMIT.into() {
        return Outcome::malformed(format!("W_{}({k}) = {size} basic products is too many to list", spec.len()));
    }
    let basis = hall_basis(&spec, k as usize);
    let elems = basis.weight(k as usize);
    Outcome::ok(match format {
        Format::Text => {
            let mut s = String::new();
            for b in elems {
                writeln!(s, "{b}").unwrap();
            }
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "bracket", "degree"]).unwrap();
            for (i, b) in elems.enumerate() {
                w.write_record([i.to_string(), b.to_string(), b.degree().to_string()])
                    .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Json => {
            let census = multidegree_census(basis.weight(k as usize), &spec);
            let elements: Vec<_> = elems
                .map(|b| json!({ "bracket": b.to_string(), "multidegree": b.multidegree(), "degree": b.degree() }))
                .collect();
            json_line(&json!({
                "degrees": spec.degrees(),
                "k": k,
                "count": elements.len(),
                "census": census,
                "elements": elements,
            }))
        }
    })
}

fn cmd_stems(p: u64, r: Option<u64>, detector: Option<u64>, format: Format) -> Outcome {
    if let Some(j) = detector {
        return match detector_class(p, j) {
            Ok(d) => Outcome::ok(match format {
                Format::Text => format!(
                    "f_{{{p},{j}}} in pi_{}(S^3), e = {}, order {}\n",
                    d.domain_degree, d.e_value, d.order
                ),
                Format::Csv => format!(
                    "p,j,domain_degree,e,order\n{p},{j},{},{},{}\n",
                    d.domain_degree, d.e_value, d.order
                ),
                Format::Json => json_line(&d),
            }),
            Err(e) => Outcome::malformed(e),
        };
    }
    let Ok(r) = u32::try_from(r.expect("clap requires r or detector")) else {
        return Outcome::malformed("r is too large");
    };
    #[derive(Serialize)]
    struct WitnessDoc {
        #[serde(flatten)]
        witness: StemWitness,
        stable_from: u64,
    }
    match stable_summand_stem(p, r) {
        Ok(w) => Outcome::ok(match format {
            Format::Text => format!("Z/{p}^{r} is a summand of pi_{}^S ({})\n", w.j, w.case),
            Format::Csv => format!(
                "p,r,j,case,t\n{p},{r},{},{},{}\n",
                w.j,
                w.case,
                w.t.map(|t| t.to_string()).unwrap_or_default()
            ),
            Format::Json => json_line(&WitnessDoc {
                witness: w,
                stable_from: w.stable_from(),
            }),
        }),
        Err(e) => Outcome::malformed(e),
    }
}

fn parse_space(s: &str) -> Result<SpaceId, Outcome> {
    s.parse::<SpaceId>().map_err(Outcome::malformed)
}

fn emit(doc: &CertificateDocument, format: Format, profile: Option<String>) -> Outcome {
    let mut out = match format {
        Format::Json => json_line(doc),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    };
    if let Some(p) = profile {
        out.push_str(&p);
    }
    Outcome::ok(out)
}

fn profile_text(profile: &crate::hyperbolicity::GrowthProfile, format: Format) -> String {
    match format {
        Format::Json => json_line(profile),
        _ => {
            let mut s = String::from("m,t_m,bound_exponent,meets_bound\n");
            for pt in &profile.points {
                writeln!(s, "{},{},{},{}", pt.m, pt.t_m, pt.bound_exponent, pt.meets_bound).unwrap();
            }
            s
        }
    }
}

fn cmd_wedge(args: WedgeArgs) -> Outcome {
    let Ok(r) = u32::try_from(args.r) else {
        return Outcome::malformed("r is too large");
    };
    if !is_prime(args.p) {
        return Outcome::malformed(format!("{} is not prime", args.p));
    }
    let (q1, q2, label) = match (&args.space, args.q1, args.q2) {
        (Some(s), _, _) => {
            let space = match parse_space(s) {
                Ok(x) => x,
                Err(o) => return o,
            };
            match wedge_degrees_for(&space, args.p) {
                Ok((q1, q2)) => (q1, q2, space.to_string()),
                Err(o) => return o,
            }
        }
        (None, Some(q1), Some(q2)) => (q1, q2, format!("Wedge({},{})", q1.min(q2) + 1, q1.max(q2) + 1)),
        _ => return Outcome::malformed("give --q1 and --q2, or --space"),
    };
    match wedge_summand_census(q1, q2, args.p, r, args.kmax) {
        Ok(census) => {
            let doc = CertificateDocument::from_wedge(&census, &label);
            let profile = args
                .profile
                .then(|| profile_text(&growth_profile(&census), args.format));
            emit(&doc, args.format, profile)
        }
        Err(e) => Outcome::malformed(e),
    }
}

/// Sphere degrees `(q1, q2)` for a census over `space`, via the retract
/// catalog or directly for a wedge of two spheres.
fn wedge_degrees_for(space: &SpaceId, p: u64) -> Result<(u64, u64), Outcome> {
    if let SpaceId::Wedge(dims) = space {
        return match dims.as_slice() {
            [a, b] if *a >= 2 && *b >= 2 => Ok((*a as u64 - 1, *b as u64 - 1)),
            _ => Err(Outcome::malformed("census needs a wedge of two spheres of dimension at least 2")),
        };
    }
    match retract_catalog(space) {
        Ok(RetractLookup::Retract(entry)) => {
            if entry.applies_at(p) {
                Ok((entry.q1, entry.q2))
            } else {
                Err(Outcome::hypothesis(
                    json!({ "reason": "prime-excluded", "p": p }),
                    format!("the retract of {space} is only known away from {:?}", entry.excluded_primes),
                ))
            }
        }
        Ok(RetractLookup::ExistenceOnly { note, .. }) => Err(Outcome::hypothesis(
            json!({ "reason": "existence-only" }),
            format!("{space}: {note}; no sphere degrees are known, so no census"),
        )),
        Err(e) => Err(Outcome::malformed(e)),
    }
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>, String> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad entry {x:?}: {e}")))
                .collect()
        })
        .collect()
}

fn cmd_certify(args: CertifyArgs) -> Outcome {
    let space = match parse_space(&args.space) {
        Ok(s) => s,
        Err(o) => return o,
    };
    if !is_prime(args.p) {
        return Outcome::malformed(format!("{} is not prime", args.p));
    }
    let result = match &args.map_matrix {
        None => certify_catalog_space(&space, args.p, args.kmax),
        Some(text) => {
            let rows = match parse_matrix(text) {
                Ok(r) => r,
                Err(e) => return Outcome::malformed(e),
            };
            let mode = match args.input_mode {
                ModeArg::KTheory => InputMode::KTheory,
                ModeArg::Cohomology => InputMode::Cohomology,
            };
            let model = match catalog_kmodel(&space) {
                Ok(m) => m,
                Err(e) => return Outcome::malformed(e),
            };
            match ModPMap::new(args.p, args.q1.unwrap(), args.q2.unwrap(), rows, mode) {
                Ok(map) => k_detection_certificate(&space.to_string(), &model, &map, args.p, args.kmax),
                Err(e) => return Outcome::malformed(e),
            }
        }
    };
    match result {
        Ok(CertificationOutcome::Certified(cert)) => {
            let doc = CertificateDocument::from_certificate(&cert);
            let profile = args
                .profile
                .then(|| profile_text(&growth_profile(cert.as_ref()), args.format));
            emit(&doc, args.format, profile)
        }
        Ok(CertificationOutcome::HypothesisFailure(f)) => hypothesis_failure(f),
        Err(HyperError::EvenPrime(p)) => hypothesis_failure(HypothesisFailure::EvenPrime { p }),
        Err(HyperError::KTheory(KTheoryError::NoBuiltinMap { space })) => {
            hypothesis_failure(HypothesisFailure::NoBuiltinMap { space })
        }
        Err(e) => Outcome::malformed(e),
    }
}

fn hypothesis_failure(f: HypothesisFailure) -> Outcome {
    let message = f.to_string();
    Outcome::hypothesis(f, message)
}

fn cmd_catalog(space: &str, format: Format) -> Outcome {
    let space = match parse_space(space) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let retract = retract_catalog(&space).ok();
    let poly = poincare_polynomial(&space).ok();
    let model = catalog_kmodel(&space).ok();
    if poly.is_none() && retract.is_none() {
        return Outcome::malformed(format!("nothing is known about {space}"));
    }
    let builtin = builtin_wedge_degrees(&space);
    Outcome::ok(match format {
        Format::Json => json_line(&json!({
            "space": space.to_string(),
            "poincare": poly.as_ref().map(|p| p.coefficients().to_vec()),
            "euler_characteristic": poly.as_ref().map(|p| p.euler_characteristic()),
            "kmodel": model,
            "lambda_exponent": model.as_ref().map(lambda_exponent),
            "builtin_map": builtin.map(|(q1, q2)| json!({ "q1": q1, "q2": q2 })),
            "retract": retract,
        })),
        _ => {
            let mut s = format!("{space}\n");
            if let Some(p) = &poly {
                writeln!(s, "poincare: {p}").unwrap();
                writeln!(s, "euler characteristic: {}", p.euler_characteristic()).unwrap();
            }
            if let Some(m) = &model {
                writeln!(s, "lambda exponent: {}", lambda_exponent(m)).unwrap();
            }
            if let Some((q1, q2)) = builtin {
                writeln!(s, "built-in map from S^{} v S^{}", q1 + 1, q2 + 1).unwrap();
            }
            match &retract {
                Some(RetractLookup::Retract(e)) => {
                    writeln!(s, "retract: q = ({}, {}), excluded primes {:?}", e.q1, e.q2, e.excluded_primes).unwrap()
                }
                Some(RetractLookup::ExistenceOnly { note, .. }) => writeln!(s, "retract: {note}").unwrap(),
                None => {}
            }
            s
        }
    })
}

fn cmd_oracles(scope: ScopeArg, format: Format) -> Outcome {
    let scope = match scope {
        ScopeArg::Numtheory => Scope::Numtheory,
        ScopeArg::Freelie => Scope::Freelie,
        ScopeArg::Stems => Scope::Stems,
        ScopeArg::All => Scope::All,
    };
    let report = verify_oracles(scope);
    let stdout = match format {
        Format::Json => json_line(&report),
        _ => report.to_string(),
    };
    if report.passed() {
        Outcome::ok(stdout)
    } else {
        Outcome {
            code: EXIT_MALFORMED,
            stdout,
            stderr: "error: oracle failures\n".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> Outcome {
        run(std::iter::once("phyper").chain(args.split_whitespace()))
    }

    #[test]
    fn witt_text() {
        let o = call("witt --n 2 --k 8");
        assert_eq!((o.code, o.stdout.as_str()), (0, "30\n"));
    }

    #[test]
    fn usage_errors() {
        let o = call("frobnicate");
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("Usage"));
        assert_eq!(call("witt --n 0 --k 3").code, 1);
        assert_eq!(call("witt --n x --k 3").code, 1);
        assert_eq!(call("stems --p 4 --r 1").code, 1);
        assert_eq!(call("--help").code, 0);
        assert_eq!(call("--version").code, 0);
    }

    #[test]
    fn stems_json() {
        let o = call("stems --p 3 --r 1");
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["j"], 7);
        assert_eq!(v["case"], "odd-primary");
        assert_eq!(v["t"], 2);
        let d: serde_json::Value = serde_json::from_str(&call("stems --p 3 --detector 4").stdout).unwrap();
        assert_eq!(d["domain_degree"], 18);
    }

    #[test]
    fn hall_listing() {
        let o = call("hall --n 2 --k 3");
        assert_eq!(o.stdout, "[x1,[x1,x2]]\n[x2,[x1,x2]]\n");
        let o = call("hall --degrees 1,2 --k 2 --format csv");
        assert_eq!(o.stdout, "index,bracket,degree\n0,\"[x1,x2]\",3\n");
    }

    #[test]
    fn certify_and_failures() {
        let o = call("certify --space CP(2) --p 3 --kmax 10 --format json");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let doc = CertificateDocument::from_json(&o.stdout).unwrap();
        assert_eq!((doc.c, doc.a), (Some(4), 20));

        let o = call("certify --space CP(2) --p 3 --kmax 10 --map-matrix 1,1;2,2 --q1 2 --q2 4");
        assert_eq!(o.code, 2);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["status"], "hypothesis_failure");
        assert_eq!(v["reason"], "not-surjective");
        assert_eq!(v["rank"], 1);

        assert_eq!(call("certify --space CP(2) --p 2 --kmax 10").code, 2);
        assert_eq!(call("certify --space S(3) --p 3 --kmax 10").code, 2);
        assert_eq!(call("certify --space CP(2) --p 3 --kmax 61").code, 1);
        assert_eq!(call("certify --space XY(2) --p 3 --kmax 10").code, 1);
        assert_eq!(call("certify --space CP(2) --p 3 --kmax 10 --map-matrix 1,a;0,1 --q1 2 --q2 4").code, 1);
    }

    #[test]
    fn wedge_from_catalog() {
        let o = call("wedge-census --space Conf(3,3) --p 3 --kmax 9 --format csv");
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.starts_with("k,N,count\n8,16,30\n"));
        assert_eq!(call("wedge-census --space SigmaCP2 --p 2 --r 1 --kmax 9").code, 2);
        assert_eq!(call("wedge-census --space PolyhedralProduct --p 3 --kmax 9").code, 2);
        assert_eq!(call("wedge-census --space CP(2) --p 3 --kmax 9").code, 1);
        let a = call("wedge-census --q1 1 --q2 1 --p 3 --kmax 12 --profile");
        let b = call("wedge-census --space Wedge(2,2) --p 3 --kmax 12 --profile");
        assert_eq!(a, b);
    }

    #[test]
    fn catalog_output() {
        let v: serde_json::Value = serde_json::from_str(&call("catalog --space Milnor(2,3)").stdout).unwrap();
        assert_eq!(v["euler_characteristic"], 9);
        assert_eq!(v["lambda_exponent"], 4);
        let v: serde_json::Value = serde_json::from_str(&call("catalog --space SigmaHP2").stdout).unwrap();
        assert_eq!(v["retract"]["Retract"]["q2"], 8);
    }
}
