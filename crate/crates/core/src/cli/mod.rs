//! The `heckepair` command line: argument parsing, config loading, and one
//! report-producing function per subcommand.

mod sampling;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{Mat2, Rat};
use crate::cosets::{HeckeAlgebra, HeckeElement};
use crate::error::{Error, Result};
use crate::families::{
    certify_th_global, certify_th_p, fundamental_unit, heis_orbit, heis_orbit_size, th_decompose_global,
    th_decompose_p, unit_image_gap,
};
use crate::grouppair::{pair_from_json, BaseRing, GElem, PairDescriptor};
use crate::report::{Record, Report, Verdict};
use crate::tower::{build_tower, compare_quotient, m_index_growth, verify_stage};

pub use sampling::{draw, Samples};

/// Directory searched for relative `--config` paths and for `default.json`.
pub const CONFIG_DIR_ENV: &str = "HECKEPAIR_CONFIG_DIR";

#[derive(Parser, Debug)]
#[command(name = "heckepair", version, about = "Exact checks for Hecke pairs N ⋊ Q")]
pub struct Cli {
    /// Pair configuration (JSON). Relative paths are also looked up in $HECKEPAIR_CONFIG_DIR.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override the double-coset enumeration bound.
    #[arg(long, global = true)]
    pub bound_cosets: Option<usize>,
    /// Write the JSON-lines report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the pair on sampled elements.
    Pair {
        #[command(subcommand)]
        cmd: PairCmd,
    },
    /// Left cosets, L(x), L(x⁻¹), Δ(x) and the canonical key of HxH.
    Dcoset {
        /// Element such as "n=(1/2,0);q=[[2,0],[0,1]]".
        element: String,
    },
    /// Hecke algebra products.
    Hecke {
        #[command(subcommand)]
        cmd: HeckeCmd,
    },
    /// Finite completion stages.
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Factorizations in GL(2).
    Gl2 {
        #[command(subcommand)]
        cmd: Gl2Cmd,
    },
    /// Units of Z[√d] modulo s.
    Quad {
        #[command(subcommand)]
        cmd: QuadCmd,
    },
    /// Orbits in the Heisenberg family.
    Heis {
        #[command(subcommand)]
        cmd: HeisCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum PairCmd {
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Seed for the sample generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random samples drawn in addition to the fixed ones.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// f*g, f*, g* and an associativity spot-check.
    Mul {
        /// Path to {"terms":[...]}, inline JSON, or an element (meaning its χ).
        f: String,
        g: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TowerCmd {
    Build(TowerArgs),
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// Seed elements of Q, separated by '|' or given repeatedly.
    #[arg(long)]
    pub seed: Vec<String>,
    /// Number of stages beyond the base stage (default: one per seed).
    #[arg(long)]
    pub stages: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Gl2Cmd {
    Decompose {
        /// Work over Z_(p); without it, over Z[1/p] for all p at once (det ±1 part via gcd).
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuadCmd {
    Units {
        #[arg(long)]
        d: i64,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeisCmd {
    Orbit {
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        w: u64,
    },
}

/// Loads the pair from `--config`, from `default.json` in the config
/// directory, or falls back to `GL(2, ℤ[1/2])`.
pub fn load_pair(config: Option<&Path>, bound_cosets: Option<usize>) -> Result<PairDescriptor> {
    let dir = std::env::var_os(CONFIG_DIR_ENV).map(PathBuf::from);
    let path = match config {
        Some(p) if p.exists() || p.is_absolute() => Some(p.to_path_buf()),
        Some(p) => match &dir {
            Some(d) if d.join(p).exists() => Some(d.join(p)),
            _ => Some(p.to_path_buf()),
        },
        None => dir.map(|d| d.join("default.json")).filter(|p| p.exists()),
    };
    let pair = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Error::config("<file>", format!("{}: {e}", p.display())))?;
            pair_from_json(&text)?
        }
        None => PairDescriptor::full_gl2(BaseRing::ZInvP(2))?,
    };
    Ok(match bound_cosets {
        Some(0) => return Err(Error::config("bound-cosets", "must be positive")),
        Some(b) => {
            let mut bounds = *pair.bounds();
            bounds.coset_enum_max = b;
            pair.with_bounds(bounds)
        }
        None => pair,
    })
}

fn is_bound(e: &Error) -> bool {
    crate::grouppair::is_bound_error(e)
}

/// A record for a computation that failed: inconclusive when a bound was
/// hit, a failure otherwise.
fn error_record(name: &str, anchor: &str, inputs: Value, e: &Error) -> Record {
    let verdict = if is_bound(e) { Verdict::Inconclusive } else { Verdict::Fail };
    Record::new(name, anchor, inputs, json!({ "error": e.to_string() }), verdict)
}

fn record_from<T: serde::Serialize>(
    name: &str,
    anchor: &str,
    inputs: Value,
    result: Result<T>,
    verdict: impl FnOnce(&T) -> Verdict,
) -> Record {
    match result {
        Ok(v) => {
            let verdict = verdict(&v);
            Record::new(name, anchor, inputs, serde_json::to_value(&v).expect("serializable"), verdict)
        }
        Err(e) => error_record(name, anchor, inputs, &e),
    }
}

fn mats(ms: &[Mat2]) -> Value {
    json!(ms.iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn cmd_pair_verify(pair: &PairDescriptor, seed: u64, extra: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = draw(pair, extra, &mut rng);
    let mut report = Report::new("pair verify", Some(seed));
    let pair_desc = pair.describe();

    let inputs = json!({ "pair": pair_desc, "q": mats(&s.q), "n": s.n.iter().map(crate::arith::mat2::fmt_vec).collect::<Vec<_>>() });
    report.push(record_from(
        "pair.hecke_indices",
        "finite stabilizer indices",
        inputs,
        pair.is_hecke_pair(&s.q, &s.n),
        |r| r.verdict,
    ));

    let inputs = json!({ "pair": pair_desc, "stage": mats(&s.stage) });
    report.push(record_from(
        "pair.reduced_stage",
        "trivial core of conjugates of H",
        inputs,
        pair.reduced_check(&s.stage),
        |r| r.verdict,
    ));

    let mut xs: Vec<GElem> = Vec::new();
    for q in &s.q {
        xs.push(pair.q_elem(q.clone()).expect("sampled in Q"));
    }
    for n in &s.n {
        xs.push(pair.n_elem(n.clone()).expect("sampled in N"));
    }
    for (q, n) in s.q.iter().zip(&s.n) {
        xs.push(pair.elem(n.clone(), q.clone()).expect("sampled in G"));
    }
    let inputs = json!({
        "pair": pair_desc,
        "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "h": s.h.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    report.push(record_from(
        "pair.stabilizer_identities",
        "stabilizers as products of M- and R-parts",
        inputs,
        pair.verify_stabilizer_identities(&xs, &s.h),
        |r| r.verdict,
    ));

    if pair.has_scalars() {
        let inputs = json!({ "pair": pair_desc, "q": mats(&s.q) });
        report.push(record_from(
            "pair.downward_directed",
            "conjugates of M downward directed",
            inputs,
            pair.downward_directed_check(&s.q),
            |r| r.verdict,
        ));
    }

    let engine = crate::cosets::CosetEngine::new(pair.clone());
    for x in xs.iter().filter(|x| x.q().is_identity() || x.n().iter().all(Rat::is_zero)) {
        let inputs = json!({ "pair": pair_desc, "x": x.to_string() });
        let l = engine.l_of(x);
        let formula = engine.l_by_indices(x).expect("pure element");
        let record = match (l, formula) {
            (Ok(l), Ok(f)) => Record::new(
                "pair.double_coset_degree",
                "L(x) equals the stabilizer index product",
                inputs,
                json!({ "L_bfs": l, "L_indices": f.to_string() }),
                Verdict::from_bool(num_bigint::BigInt::from(l) == f),
            ),
            (Err(e), _) | (_, Err(e)) => error_record(
                "pair.double_coset_degree",
                "L(x) equals the stabilizer index product",
                inputs,
                &e,
            ),
        };
        report.push(record);
    }
    report.finish()
}

pub fn cmd_dcoset(pair: &PairDescriptor, element: &str) -> Result<Report> {
    let x = pair.parse_elem(element)?;
    let engine = crate::cosets::CosetEngine::new(pair.clone());
    let mut report = Report::new(format!("dcoset {element}"), None);
    let inputs = json!({ "pair": pair.describe(), "x": x.to_string() });
    let anchor = "Δ(x) = L(x)/L(x⁻¹)";
    let outcome = (|| -> Result<(Value, Verdict)> {
        let dc = engine.double_coset(&x)?;
        let xi = pair.inv(&x)?;
        let l_inv = engine.l_of(&xi)?;
        let delta = engine.delta(&x)?;
        let mut verdict = Verdict::from_bool(dc.l == dc.left_reps.len() as u64);
        let formula = match engine.l_by_indices(&x) {
            Some(f) => {
                let f = f?;
                verdict = verdict.and(Verdict::from_bool(f == num_bigint::BigInt::from(dc.l)));
                Some(f.to_string())
            }
            None => None,
        };
        Ok((
            json!({
                "left_reps": dc.left_reps.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "L": dc.l,
                "L_inverse": l_inv,
                "delta": delta.to_string(),
                "key": dc.key,
                "L_indices": formula,
            }),
            verdict,
        ))
    })();
    report.push(match outcome {
        Ok((out, v)) => Record::new("dcoset", anchor, inputs, out, v),
        Err(e) => error_record("dcoset", anchor, inputs, &e),
    });
    Ok(report.finish())
}

/// Reads a Hecke element from a file path, inline JSON, or a bare group element.
pub fn read_hecke_element(algebra: &HeckeAlgebra, arg: &str) -> Result<HeckeElement> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("terms").is_some() {
            return algebra.element_from_json(&v);
        }
    }
    algebra.chi(&algebra.pair().parse_elem(trimmed)?)
}

pub fn cmd_hecke_mul(pair: &PairDescriptor, f: &str, g: &str) -> Result<Report> {
    let algebra = HeckeAlgebra::new(pair.clone());
    let fe = read_hecke_element(&algebra, f)?;
    let ge = read_hecke_element(&algebra, g)?;
    let mut report = Report::new("hecke mul", None);
    let inputs = json!({ "pair": pair.describe(), "f": fe.to_json(), "g": ge.to_json() });
    let conv = "f*g(x) = Σ f(y)g(y⁻¹x)";
    let invol = "f*(x) = f(x⁻¹)Δ(x⁻¹)";

    match algebra.convolve(&fe, &ge) {
        Ok(p) => report.push(Record::new("hecke.product", conv, inputs.clone(), p.to_json(), Verdict::Pass)),
        Err(e) => report.push(error_record("hecke.product", conv, inputs.clone(), &e)),
    }
    let stars = (|| -> Result<(HeckeElement, HeckeElement)> {
        Ok((algebra.involution(&fe)?, algebra.involution(&ge)?))
    })();
    match &stars {
        Ok((fs, gs)) => report.push(Record::new(
            "hecke.involution",
            invol,
            inputs.clone(),
            json!({ "f_star": fs.to_json(), "g_star": gs.to_json() }),
            Verdict::from_bool(
                algebra.involution(fs).ok().as_ref() == Some(&fe) && algebra.involution(gs).ok().as_ref() == Some(&ge),
            ),
        )),
        Err(e) => report.push(error_record("hecke.involution", invol, inputs.clone(), e)),
    }
    let assoc = (|| -> Result<(HeckeElement, HeckeElement)> {
        let left = algebra.convolve(&algebra.convolve(&fe, &ge)?, &fe)?;
        let right = algebra.convolve(&fe, &algebra.convolve(&ge, &fe)?)?;
        Ok((left, right))
    })();
    match assoc {
        Ok((l, r)) => report.push(Record::new(
            "hecke.associativity",
            conv,
            inputs.clone(),
            json!({ "(f*g)*f": l.to_json(), "f*(g*f)": r.to_json() }),
            Verdict::from_bool(l == r),
        )),
        Err(e) => report.push(error_record("hecke.associativity", conv, inputs.clone(), &e)),
    }
    let anti = (|| -> Result<bool> {
        let (fs, gs) = stars.clone()?;
        let left = algebra.involution(&algebra.convolve(&fe, &ge)?)?;
        Ok(left == algebra.convolve(&gs, &fs)?)
    })();
    match anti {
        Ok(ok) => report.push(Record::new(
            "hecke.anti_multiplicative",
            invol,
            inputs,
            json!({ "equal": ok }),
            Verdict::from_bool(ok),
        )),
        Err(e) => report.push(error_record("hecke.anti_multiplicative", invol, inputs, &e)),
    }
    Ok(report.finish())
}

/// Parses a seed as a bare matrix `[[a,b],[c,d]]`, a `t=...` parameter, or an
/// element with trivial `n`-part.
pub fn parse_q_seed(pair: &PairDescriptor, s: &str) -> Result<Mat2> {
    let s = s.trim();
    let q = if s.starts_with("[[") {
        s.parse::<Mat2>()?
    } else {
        let x = pair.parse_elem(s)?;
        if !x.n().iter().all(Rat::is_zero) {
            return Err(Error::Parse(format!("seed {s} has a nonzero n-part")));
        }
        x.q().clone()
    };
    pair.check_q(&q)?;
    Ok(q)
}

pub fn cmd_tower(pair: &PairDescriptor, seeds: &[String], stages: Option<usize>) -> Result<Report> {
    let mut qs = Vec::new();
    for s in seeds.iter().flat_map(|s| s.split('|')).filter(|s| !s.trim().is_empty()) {
        qs.push(parse_q_seed(pair, s)?);
    }
    let k = stages.unwrap_or(qs.len());
    if k > qs.len() {
        return Err(Error::config("stages", format!("{k} stages requested but only {} seeds", qs.len())));
    }
    qs.truncate(k);
    let mut report = Report::new("tower build", None);
    let base_inputs = json!({ "pair": pair.describe(), "seeds": mats(&qs) });
    let tower = match build_tower(pair, &qs, None) {
        Ok(t) => t,
        Err(e) => {
            report.push(error_record("tower.build", "finite quotients M/M_E ⋊ R/R^E_F", base_inputs, &e));
            return Ok(report.finish());
        }
    };
    report.push(Record::new(
        "tower.build",
        "finite quotients M/M_E ⋊ R/R^E_F",
        base_inputs.clone(),
        tower.to_json(),
        Verdict::Pass,
    ));
    for (i, st) in tower.stages.iter().enumerate() {
        let inputs = json!({ "stage": i, "seeds": mats(&qs[..i]) });
        report.push(record_from(
            "tower.stage_checks",
            "R^E_F normal, M_E R-stable, R^E_F trivial on M/M_E",
            inputs.clone(),
            verify_stage(pair, st),
            |c| c.verdict,
        ));
        if st.order() <= 2000 {
            report.push(record_from(
                "tower.quotient_isomorphism",
                "MR/LS ≅ (M/L) ⋊ (R/S)",
                inputs,
                compare_quotient(pair, st),
                |c| c.verdict,
            ));
        }
    }
    for (fine, coarse, m) in &tower.maps {
        report.push(Record::new(
            "tower.connecting_map",
            "inverse system of finite quotients",
            json!({ "fine": fine, "coarse": coarse }),
            serde_json::to_value(m).expect("serializable"),
            m.verdict(),
        ));
    }
    for ((i, j, l), ok) in tower.triangles() {
        report.push(Record::new(
            "tower.triangle",
            "inverse system of finite quotients",
            json!({ "stages": [i, j, l] }),
            json!({ "commutes": ok }),
            Verdict::from_bool(ok),
        ));
    }
    let (idx, monotone, strict) = m_index_growth(&tower.stages);
    report.push(Record::new(
        "tower.m_index_growth",
        "[M:M_E] grows along nested E",
        base_inputs,
        json!({ "indices": idx, "monotone": monotone, "strict": strict }),
        Verdict::from_bool(monotone),
    ));
    Ok(report.finish())
}

pub fn cmd_gl2_decompose(p: Option<u64>, matrix: &str) -> Result<Report> {
    let g: Mat2 = matrix.parse()?;
    let mut report = Report::new(format!("gl2 decompose {matrix}"), None);
    let inputs = json!({ "p": p, "matrix": g.to_string() });
    let anchor = "g = t·k with t lower triangular";
    let result = match p {
        Some(p) => th_decompose_p(&g, p).map(|d| {
            let ok = certify_th_p(&g, &d, p);
            (d, ok)
        }),
        None => th_decompose_global(&g).map(|d| {
            let ok = certify_th_global(&g, &d);
            (d, ok)
        }),
    };
    report.push(match result {
        Ok((d, ok)) => Record::new(
            "gl2.decomposition",
            anchor,
            inputs,
            json!({ "t": d.t.to_string(), "k": d.k.to_string(), "case": d.case, "swapped": d.swapped }),
            Verdict::from_bool(ok),
        ),
        Err(e @ Error::NotPrime(_)) => return Err(e),
        Err(e) => error_record("gl2.decomposition", anchor, inputs, &e),
    });
    Ok(report.finish())
}

pub fn cmd_quad_units(d: i64, modulus: Option<u64>) -> Result<Report> {
    let mut report = Report::new(format!("quad units d={d}"), None);
    let r0 = fundamental_unit(d)?;
    report.push(Record::new(
        "quad.fundamental_unit",
        "fundamental unit of Z[√d]",
        json!({ "d": d }),
        json!({ "r0": r0.to_string(), "norm": r0.norm().to_string() }),
        Verdict::from_bool(r0.is_unit()),
    ));
    if let Some(s) = modulus {
        let data = unit_image_gap(d, s)?;
        let consistent = data.unit_image.is_subset(&data.full_units) && data.full_size % data.image_size == 0;
        report.push(Record::new(
            "quad.unit_image",
            "±r0^Z modulo s inside (Z/s[√d])^×",
            json!({ "d": d, "s": s }),
            serde_json::to_value(&data).expect("serializable"),
            Verdict::from_bool(consistent),
        ));
    }
    Ok(report.finish())
}

pub fn cmd_heis_orbit(s: u64, z: u64, w: u64) -> Result<Report> {
    let orbit = heis_orbit(z, w, s)?;
    let mut report = Report::new(format!("heis orbit s={s} z={z} w={w}"), None);
    let expected = heis_orbit_size(z, s);
    report.push(Record::new(
        "heis.orbit",
        "orbit size s/gcd(z, s)",
        json!({ "s": s, "z": z, "w": w }),
        json!({ "orbit": orbit, "size": orbit.len(), "gcd": z.gcd(&s) }),
        Verdict::from_bool(orbit.len() as u64 == expected),
    ));
    Ok(report.finish())
}

/// Parses `args`, runs the command, writes the report, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = (|| -> Result<Report> {
        let pair = || load_pair(cli.config.as_deref(), cli.bound_cosets);
        match &cli.command {
            Command::Pair { cmd: PairCmd::Verify(a) } => Ok(cmd_pair_verify(&pair()?, a.seed, a.samples)),
            Command::Dcoset { element } => cmd_dcoset(&pair()?, element),
            Command::Hecke { cmd: HeckeCmd::Mul { f, g } } => cmd_hecke_mul(&pair()?, f, g),
            Command::Tower { cmd: TowerCmd::Build(a) } => cmd_tower(&pair()?, &a.seed, a.stages),
            Command::Gl2 { cmd: Gl2Cmd::Decompose { p, matrix } } => cmd_gl2_decompose(*p, matrix),
            Command::Quad { cmd: QuadCmd::Units { d, modulus } } => cmd_quad_units(*d, *modulus),
            Command::Heis { cmd: HeisCmd::Orbit { modulus, z, w } } => cmd_heis_orbit(*modulus, *z, *w),
        }
    })();
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let lines = report.to_json_lines();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &lines) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{lines}"),
    }
    print!("{}", report.human_summary());
    report.exit_code()
}
