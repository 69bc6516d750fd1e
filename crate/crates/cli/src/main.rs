use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use dlab_cli::pipeline::run_experiment;
use dlab_cli::spec::{default_bits, AlphaSpec, ExperimentConfig, PhiSpec};
use dlab_cli::{decimal_to_rat, parse_scale_list, rat_to_decimal};
use dlab_core::numeric::log10_rat;
use dlab_core::{
    box_count_exact, case_fact, gap_spectrum_bruteforce, landscape_min, log_convexity_check,
    s_formula, s_piecewise, spectrum_matches_groups, theorem2_both_forms,
    theorem2_lower_bound, IntervalSet, Rat,
};
use num::bigint::BigInt;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

#[derive(Parser)]
#[command(name = "dlab", about = "exact circle-rotation level-set laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print convergents p_k/q_k of alpha as CSV, plus a type estimate.
    Cf {
        /// alpha spec: "golden" | "sqrt2" | "e" | JSON quotients/growth spec
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Gap spectrum of the orbit points { n alpha : m_lo < n <= m_hi }.
    Gaps {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long)]
        bits: Option<u32>,
        /// also verify the spectrum against the convergent group structure
        #[arg(long)]
        n_index: Option<usize>,
    },
    /// Per-level geometry of the nested arc construction, as CSV.
    Levels {
        /// preset name, config JSON file path, or inline JSON
        config: String,
        /// write materialized arcs of the intersection to this JSON file
        #[arg(long)]
        arcs_out: Option<String>,
        /// fractional digits of arc endpoints in the JSON output
        #[arg(long, default_value_t = 48)]
        digits: u32,
    },
    /// Sample a rate function: CSV of n, phi_lo, phi_hi, ratio.
    Phi {
        /// phi spec JSON, e.g. {"family":"thm5","l":"1/3","u":"1/2"}
        #[arg(long)]
        phi: String,
        /// alpha spec; required by the banded families, ignored otherwise
        #[arg(long, default_value = "golden")]
        alpha: String,
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long, default_value_t = 4096)]
        n_max: u64,
        /// geometric sample count; 0 = every n in range
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Evaluate the dimension formula and lower bounds exactly.
    Formula {
        /// exponent N as "p/q"
        #[arg(long)]
        n: String,
        /// exponent B as "p/q"
        #[arg(long)]
        b: String,
        /// scale exponent K as "p/q"
        #[arg(long)]
        k: String,
        /// optional (u, l, beta) triple for the lower-bound landscape
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Count boxes of an arcs JSON file at the given scales.
    Boxdim {
        /// arcs JSON file as written by `levels --arcs-out`
        #[arg(long)]
        arcs: String,
        /// comma-separated scales, e.g. "1/64,1/512,0.001"
        #[arg(long)]
        scales: String,
    },
    /// Run the internal invariant suites; exit 0 iff all pass.
    Verify {
        #[arg(long, default_value_t = 20_000)]
        tuples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Run a full experiment (preset name or config JSON) and print the report.
    Run { config: String },
}

fn load_config(arg: &str) -> Result<ExperimentConfig> {
    let t = arg.trim();
    if t.starts_with('{') {
        return Ok(ExperimentConfig::from_json(t)?);
    }
    if Path::new(t).exists() {
        let body = std::fs::read_to_string(t).with_context(|| format!("reading {t}"))?;
        return Ok(ExperimentConfig::from_json(&body)?);
    }
    Ok(ExperimentConfig::preset(t)?)
}

fn parse_rat_arg(s: &str, what: &str) -> Result<Rat> {
    decimal_to_rat(s).ok_or_else(|| anyhow!("bad rational for {what}: {s}"))
}

fn cmd_cf(alpha: &str, depth: usize) -> Result<()> {
    let mut cf = AlphaSpec::parse(alpha)?.build()?;
    println!("k,a_k,p_k,q_k");
    for k in 1..=depth {
        let a = cf.quotient(k)?;
        let p = cf.p(k)?;
        let q = cf.q(k)?;
        println!("{k},{a},{p},{q}");
    }
    if depth >= 3 {
        // start at k = 2: the ratio is undefined while q_k = 1
        let est = cf.estimate_type_window(2, depth)?;
        println!("# beta_hat={:.6} over k in [{},{}]", est.beta_hat, est.window.0, est.window.1);
    }
    Ok(())
}

fn cmd_gaps(alpha: &str, lo: u64, hi: u64, bits: u32, n_index: Option<usize>) -> Result<()> {
    let mut cf = AlphaSpec::parse(alpha)?.build()?;
    let spec = gap_spectrum_bruteforce(&mut cf, &BigInt::from(lo), &BigInt::from(hi), bits)?;
    println!("gap_length_lo,gap_length_hi,multiplicity");
    for c in &spec.classes {
        println!(
            "{},{},{}",
            rat_to_decimal(&c.length.lo, 30),
            rat_to_decimal(&c.length.hi, 30),
            c.multiplicity
        );
    }
    println!("# points={} distinct_lengths={}", spec.point_count, spec.distinct());
    if let Some(n) = n_index {
        let gs = dlab_core::group_structure(&mut cf, n, &BigInt::from(lo), &BigInt::from(hi), bits)?;
        let ok = spectrum_matches_groups(&gs, &spec);
        println!(
            "# group_structure: q_n={} per_group={} remainder={} admissible={} matches={}",
            gs.q_n, gs.points_per_group, gs.remainder, gs.admissible, ok
        );
        if !ok {
            bail!("gap spectrum does not match the convergent group structure");
        }
    }
    Ok(())
}

fn write_arcs_json(path: &str, set: &IntervalSet, digits: u32) -> Result<()> {
    let arcs: Vec<[String; 2]> = set
        .components()
        .iter()
        .map(|(lo, hi)| [rat_to_decimal(lo, digits), rat_to_decimal(hi, digits)])
        .collect();
    let doc = serde_json::json!({ "digits": digits, "arcs": arcs });
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)
        .with_context(|| format!("writing {path}"))?;
    Ok(())
}

fn cmd_levels(config: &str, arcs_out: Option<&str>, digits: u32) -> Result<()> {
    let cfg = load_config(config)?;
    let report = run_experiment(&cfg)?;
    println!("i,n_i,m_i,q_ni,case_tag,predicted_count,actual_count,log10_y_or_z,log10_c_i,log10_d_i");
    for l in &report.levels {
        let actual = l.actual_count.map(|c| c.to_string()).unwrap_or_default();
        let c = l.log10_c.map(|v| format!("{v:.6}")).unwrap_or_default();
        let d = l.log10_d.map(|v| format!("{v:.6}")).unwrap_or_default();
        println!(
            "{},{},{},{},{},{},{},{:.6},{},{}",
            l.i, l.n_index, l.m_i, l.q_n, l.case_tag, l.predicted_count, actual, l.log10_len, c, d
        );
    }
    if let Some(path) = arcs_out {
        // re-materialize the exact prefix to dump the intersection
        let (mut cf, _phi, schedule, k, _u, _l, bits) = dlab_cli::pipeline::prepare(&cfg)?;
        let pol = dlab_core::RationalizationPolicy::default();
        let mut sets = Vec::new();
        for lvl in &schedule.levels {
            if lvl.n_points() > BigInt::from(dlab_core::EXACT_ARC_CAP as u64) {
                break;
            }
            let (set, _) = dlab_core::build_level(&mut cf, lvl, k, pol, bits)?;
            sets.push(set);
        }
        if sets.is_empty() {
            bail!("no level is small enough to materialize arcs exactly");
        }
        let (final_set, _) = dlab_core::intersect_levels(&sets)?;
        write_arcs_json(path, &final_set, digits)?;
        eprintln!("wrote {} arcs to {path}", final_set.component_count());
    }
    Ok(())
}

fn cmd_phi(
    phi: &str,
    alpha: &str,
    n_min: u64,
    n_max: u64,
    samples: usize,
    bits: u32,
) -> Result<()> {
    let mut cf = AlphaSpec::parse(alpha)?.build()?;
    let f = PhiSpec::parse(phi)?.build(&mut cf)?;
    let ns: Vec<u64> = if samples == 0 || n_max - n_min < samples as u64 {
        (n_min..=n_max).collect()
    } else {
        let ratio = (n_max as f64 / n_min as f64).powf(1.0 / (samples as f64 - 1.0));
        let mut v: Vec<u64> = (0..samples)
            .map(|i| ((n_min as f64) * ratio.powi(i as i32)).round() as u64)
            .collect();
        v.dedup();
        v
    };
    println!("n,phi_lo,phi_hi,ratio");
    for n in ns {
        let big = BigUint::from(n);
        let b = match f.eval_bounds(&big, bits) {
            Ok(b) => b,
            Err(dlab_core::Error::FamilyGap(_)) => break,
            Err(e) => return Err(e.into()),
        };
        let ratio = f.ratio_at(&big)?.map(|r| format!("{r:.8}")).unwrap_or_default();
        println!("{n},{},{},{ratio}", rat_to_decimal(&b.lo, 30), rat_to_decimal(&b.hi, 30));
    }
    Ok(())
}

fn cmd_formula(
    n: &str,
    b: &str,
    k: &str,
    u: Option<&str>,
    l: Option<&str>,
    beta: Option<&str>,
) -> Result<()> {
    let (n, b, k) = (
        parse_rat_arg(n, "N")?,
        parse_rat_arg(b, "B")?,
        parse_rat_arg(k, "K")?,
    );
    let s = s_formula(&n, &b, &k)?;
    let sp = s_piecewise(&n, &b, &k)?;
    let (nk, fallback, dichotomy) = case_fact(&n, &b, &k)?;
    let mut doc = serde_json::json!({
        "s": s.to_string(),
        "s_decimal": rat_to_decimal(&s, 12),
        "s_piecewise": sp.to_string(),
        "forms_agree": s == sp,
        "n_over_k": nk.to_string(),
        "fallback_branch": fallback.to_string(),
        "case_dichotomy_holds": dichotomy,
    });
    if let (Some(u), Some(l), Some(beta)) = (u, l, beta) {
        let (u, l, beta) = (
            parse_rat_arg(u, "u")?,
            parse_rat_arg(l, "l")?,
            parse_rat_arg(beta, "beta")?,
        );
        let bound = theorem2_lower_bound(&u, &l, &beta)?;
        let (b1, b2) = theorem2_both_forms(&u, &l, &beta)?;
        let uf = u.numer().to_f64().unwrap() / u.denom().to_f64().unwrap();
        let bf = beta.numer().to_f64().unwrap() / beta.denom().to_f64().unwrap();
        let (argmin, min) = landscape_min(uf, bf, 4000)?;
        doc["lower_bound"] = serde_json::json!({
            "value": bound.to_string(),
            "value_decimal": rat_to_decimal(&bound, 12),
            "forms_agree": b1 == b2,
            "landscape_argmin": argmin,
            "landscape_min": min,
        });
    }
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn cmd_boxdim(arcs_path: &str, scales: &str) -> Result<()> {
    let body = std::fs::read_to_string(arcs_path).with_context(|| format!("reading {arcs_path}"))?;
    let doc: serde_json::Value = serde_json::from_str(&body)?;
    let raw = doc["arcs"]
        .as_array()
        .ok_or_else(|| anyhow!("arcs file must contain an \"arcs\" array"))?;
    let mut pairs = Vec::with_capacity(raw.len());
    for a in raw {
        let lo = a[0].as_str().and_then(decimal_to_rat).ok_or_else(|| anyhow!("bad arc lo"))?;
        let hi = a[1].as_str().and_then(decimal_to_rat).ok_or_else(|| anyhow!("bad arc hi"))?;
        pairs.push((lo, hi));
    }
    let set = IntervalSet::from_raw_arcs(pairs);
    let scales = parse_scale_list(scales).ok_or_else(|| anyhow!("bad scale list"))?;
    println!("log10_scale,count");
    for d in &scales {
        println!("{:.6},{}", log10_rat(d), set.count_boxes(d));
    }
    let report = box_count_exact(&set, &scales)?;
    println!("# slope={:.6} stderr={:.6}", report.slope, report.stderr);
    Ok(())
}

fn cmd_verify(tuples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut suite = |name: &str, ok: bool| {
        println!("{name}: {}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    let rnd_rat = |rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64| {
        let d = rng.gen_range(1..=den);
        let n = rng.gen_range(lo * d..=hi * d);
        Rat::new(BigInt::from(n), BigInt::from(d))
    };

    // closed-form dimension value vs. its piecewise form, plus the case split
    let mut ok = true;
    for _ in 0..tuples {
        let n = rnd_rat(&mut rng, 1, 6, 12);
        let b = &n + rnd_rat(&mut rng, 0, 4, 12);
        let k = Rat::one() + rnd_rat(&mut rng, 1, 5, 12);
        let s = s_formula(&n, &b, &k).unwrap();
        let sp = s_piecewise(&n, &b, &k).unwrap();
        let (nk, fb, _) = case_fact(&n, &b, &k).unwrap();
        let expect = nk.min((Rat::one() / &k).max(fb));
        ok &= s == sp && s == expect;
    }
    suite("formula-forms-agree", ok);

    // both published shapes of the lower bound agree
    let mut ok = true;
    for _ in 0..tuples {
        let l = rnd_rat(&mut rng, 0, 1, 24);
        let u = (&l + rnd_rat(&mut rng, 0, 1, 24)).min(Rat::one());
        let beta = Rat::one() + rnd_rat(&mut rng, 0, 3, 12);
        if u > Rat::one() {
            continue;
        }
        let (b1, b2) = theorem2_both_forms(&u, &l, &beta).unwrap();
        ok &= b1 == b2;
    }
    suite("lower-bound-forms-agree", ok);

    // log-convexity of the two-scale interpolation
    let mut ok = true;
    for _ in 0..tuples {
        let a: f64 = rng.gen_range(0.01..0.99);
        let b = a * rng.gen_range(0.05..0.95);
        let c: f64 = rng.gen_range(0.01..0.99);
        let d = c * rng.gen_range(0.05..0.95);
        let t = rng.gen_range(0.0..=1.0);
        let (_, _, holds) = log_convexity_check(a, b, c, d, t)?;
        ok &= holds;
    }
    suite("log-convexity", ok);

    // randomized three-distance check: <= 3 gap lengths, summing to 1
    let mut ok = true;
    for _ in 0..40 {
        // deep enough that 128-bit orbit proxies never run out of convergents
        let quotients: Vec<u64> = (0..220).map(|_| rng.gen_range(1..9)).collect();
        let mut cf = match dlab_core::ContinuedFraction::from_quotients(quotients) {
            Ok(cf) => cf,
            Err(_) => continue,
        };
        let hi = rng.gen_range(3..1500u64);
        let spec = gap_spectrum_bruteforce(&mut cf, &BigInt::zero(), &BigInt::from(hi), 128).unwrap();
        ok &= spec.distinct() <= 3;
        let total: Rat = spec
            .classes
            .iter()
            .fold(Rat::zero(), |acc, c| acc + c.length.mid() * Rat::from_integer(BigInt::from(c.multiplicity)));
        ok &= (total - Rat::one()).abs() < dlab_core::numeric::rat(1, 1000);
    }
    suite("three-distance", ok);

    // landscape reference points
    let (argmin, min) = landscape_min(0.5, 3.0, 4000)?;
    suite(
        "landscape-reference",
        (min - 0.375).abs() < 1e-4 && (argmin - 4.0 / 3.0).abs() < 1e-3,
    );

    if failures > 0 {
        bail!("{failures} verification suite(s) failed");
    }
    Ok(())
}

fn cmd_run(config: &str) -> Result<()> {
    let cfg = load_config(config)?;
    let report = run_experiment(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.all_hard_passed() {
        bail!("hard assertions failed");
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let bits_default = default_bits();
    match cli.command {
        Command::Cf { alpha, depth } => cmd_cf(&alpha, depth),
        Command::Gaps { alpha, lo, hi, bits, n_index } => {
            cmd_gaps(&alpha, lo, hi, bits.unwrap_or(bits_default), n_index)
        }
        Command::Levels { config, arcs_out, digits } => {
            cmd_levels(&config, arcs_out.as_deref(), digits)
        }
        Command::Phi { phi, alpha, n_min, n_max, samples, bits } => {
            cmd_phi(&phi, &alpha, n_min, n_max, samples, bits.unwrap_or(bits_default))
        }
        Command::Formula { n, b, k, u, l, beta } => {
            cmd_formula(&n, &b, &k, u.as_deref(), l.as_deref(), beta.as_deref())
        }
        Command::Boxdim { arcs, scales } => cmd_boxdim(&arcs, &scales),
        Command::Verify { tuples, seed } => cmd_verify(tuples, seed),
        Command::Run { config } => cmd_run(&config),
    }
}
