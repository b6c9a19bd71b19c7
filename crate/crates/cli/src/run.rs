//! One pipeline per subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use limitgroup::baumslag::{
    audit_basic_certificate, audit_certificate, certify_basic, certify_general, eval_basic, eval_general,
    verify_basic_certificate, verify_certificate, BaumslagInstance, GeneralBaumslagInstance, Slot,
};
use limitgroup::construct::{
    double_of_free, enumerate_reduced, f2xf2_nonseparable, hnn_of_free, scan_double, DoubleSpec, DoubleSpecData,
    RankExtension, ScanRow,
};
use limitgroup::surface::{make_presentation, onset_certified, onset_empirical};
use limitgroup::targets::{
    cyclic_closure, find_relation, generated_subgroup, h_k_family, injectivity_on_ball, sl2_modpk_ops, HomInstance,
    Mat2Int, Mat2ModPk, Sl2ModPk, TargetGroup,
};
use limitgroup::words::nontrivial_words;
use limitgroup::{Error, FreeWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::*;
use crate::error::CliError;
use crate::report::{rows, Report};

/// Runs the configured pipeline and assembles its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let mut report = Report::new(cli.command_name(), serde_json::to_value(cli)?);
    match &cli.command {
        Command::Baumslag { cmd: BaumslagCmd::Certify(a) } => certify(a, cli.seed, &mut report)?,
        Command::Baumslag { cmd: BaumslagCmd::Sweep(a) } => sweep(a, &mut report)?,
        Command::Surface { cmd: SurfaceCmd::Onset(a) } => surface_onset(a, &mut report)?,
        Command::Surface { cmd: SurfaceCmd::TwistAudit(a) } => twist_audit(a, cli.seed, &mut report)?,
        Command::Double { cmd: DoubleCmd::Scan(a) } => double_scan(a, &mut report)?,
        Command::Residual { cmd: ResidualCmd::F2xf2(a) } => residual(a, &mut report)?,
        Command::Padic { cmd: PadicCmd::Hk(a) } => padic_hk(a, &mut report)?,
        Command::Padic { cmd: PadicCmd::Surject(a) } => padic_surject(a, &mut report)?,
        Command::Padic { cmd: PadicCmd::Freepair(a) } => padic_freepair(a, &mut report)?,
    }
    Ok(report)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

// ---- baumslag ----

#[derive(Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    Basic {
        rank: u32,
        coefficients: Vec<String>,
        z: String,
    },
    General {
        rank: u32,
        z: Vec<String>,
        u: Vec<String>,
        pattern: Vec<String>,
        #[serde(default)]
        relaxed: bool,
    },
}

enum Instance {
    Basic(BaumslagInstance),
    General(GeneralBaumslagInstance),
}

impl Instance {
    fn load(path: &Path, relaxed: bool) -> Result<Self, CliError> {
        let words = |v: &[String], rank| v.iter().map(|s| FreeWord::parse(s, rank)).collect::<Result<Vec<_>, _>>();
        Ok(match read_json::<InstanceFile>(path)? {
            InstanceFile::Basic { rank, coefficients, z } => {
                Instance::Basic(BaumslagInstance::new(words(&coefficients, rank)?, FreeWord::parse(&z, rank)?)?)
            }
            InstanceFile::General { rank, z, u, pattern, relaxed: r } => {
                let pattern = pattern.iter().map(|s| s.parse::<Slot>()).collect::<Result<Vec<_>, _>>()?;
                Instance::General(GeneralBaumslagInstance::new(
                    words(&z, rank)?,
                    words(&u, rank)?,
                    pattern,
                    r || relaxed,
                )?)
            }
        })
    }

    fn arity(&self) -> usize {
        match self {
            Instance::Basic(i) => i.coefficients.len(),
            Instance::General(i) => i.z_slot_count(),
        }
    }

    fn eval(&self, t: &[i64]) -> Result<FreeWord, Error> {
        match self {
            Instance::Basic(i) => eval_basic(i, t),
            Instance::General(i) => eval_general(i, t),
        }
    }

    fn to_json(&self) -> Result<Value, CliError> {
        Ok(match self {
            Instance::Basic(i) => json!({ "basic": i }),
            Instance::General(i) => json!({ "general": i }),
        })
    }
}

fn certify(a: &CertifyArgs, seed: u64, report: &mut Report) -> Result<(), CliError> {
    let inst = Instance::load(&a.instance, a.relaxed)?;
    let (cert, checks, verified, mutant_rejected) = match &inst {
        Instance::Basic(i) => {
            let cert = certify_basic(i)?;
            let mut mutant = cert.clone();
            mutant.n -= 1;
            (
                cert.clone(),
                audit_basic_certificate(&cert, i),
                verify_basic_certificate(&cert, i),
                !verify_basic_certificate(&mutant, i),
            )
        }
        Instance::General(i) => {
            let cert = certify_general(i)?;
            let mut mutant = cert.clone();
            mutant.n -= 1;
            (cert.clone(), audit_certificate(&cert, i), verify_certificate(&cert, i), !verify_certificate(&mutant, i))
        }
    };
    let n = cert.n as i64;
    let arity = inst.arity();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..a.samples {
        let t: Vec<i64> = (0..arity)
            .map(|s| {
                // The trailing power of the basic word is unconstrained.
                let lo = if matches!(inst, Instance::Basic(_)) && s + 1 == arity { 0 } else { n };
                let m = rng.gen_range(lo..=n + a.spread as i64);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            })
            .collect();
        if inst.eval(&t)?.is_identity() {
            failures.push(t);
        }
    }
    report.rows = rows(&checks)?;
    report.passed = verified && failures.is_empty() && mutant_rejected;
    report.summary = json!({
        "instance": inst.to_json()?,
        "N": cert.n,
        "verified": verified,
        "mutant_N_minus_1_rejected": mutant_rejected,
        "certificate": cert,
        "samples": a.samples,
        "sample_failures": failures,
    });
    Ok(())
}

/// Calls `f` on every tuple of `arity` exponents with magnitudes in
/// `lo..=hi` and both signs; stops early when `f` returns false.
fn for_each_tuple(
    arity: usize,
    lo: i64,
    hi: i64,
    mut f: impl FnMut(&[i64]) -> Result<bool, Error>,
) -> Result<bool, Error> {
    let values: Vec<i64> = (lo..=hi).flat_map(|m| if m == 0 { vec![0] } else { vec![-m, m] }).collect();
    let mut idx = vec![0usize; arity];
    let mut t: Vec<i64> = vec![values[0]; arity];
    loop {
        if !f(&t)? {
            return Ok(false);
        }
        let mut p = 0;
        loop {
            if p == arity {
                return Ok(true);
            }
            idx[p] += 1;
            if idx[p] < values.len() {
                t[p] = values[idx[p]];
                break;
            }
            idx[p] = 0;
            t[p] = values[0];
            p += 1;
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    n: u64,
    tuples: u64,
    trivial: u64,
    first_trivial: Option<Vec<i64>>,
}

fn sweep(a: &SweepArgs, report: &mut Report) -> Result<(), CliError> {
    let inst = Instance::load(&a.instance, a.relaxed)?;
    let certified = match &inst {
        Instance::Basic(i) => certify_basic(i)?.n,
        Instance::General(i) => certify_general(i)?.n,
    };
    let arity = inst.arity() as u32;
    let tuples = (2 * (a.window + 1)).checked_pow(arity).unwrap_or(u64::MAX);
    if tuples > a.tuple_cap {
        return Err(Error::CapExceeded { what: "exponent tuples per window", value: tuples, cap: a.tuple_cap }.into());
    }
    let mut out = Vec::new();
    let mut empirical = None;
    let mut at_certified_clean = None;
    for n in 1..=a.cap.max(certified) {
        if empirical.is_some() && n != certified {
            continue;
        }
        let (mut count, mut trivial, mut first) = (0u64, 0u64, None);
        for_each_tuple(arity as usize, n as i64, (n + a.window) as i64, |t| {
            count += 1;
            if inst.eval(t)?.is_identity() {
                trivial += 1;
                first.get_or_insert_with(|| t.to_vec());
            }
            Ok(true)
        })?;
        if trivial == 0 && empirical.is_none() && n <= a.cap {
            empirical = Some(n);
        }
        if n == certified {
            at_certified_clean = Some(trivial == 0);
        }
        out.push(SweepRow { n, tuples: count, trivial, first_trivial: first });
        if empirical.is_some() && n >= certified {
            break;
        }
    }
    let consistent = at_certified_clean.unwrap_or(true) && empirical.is_none_or(|e| e <= certified);
    report.rows = rows(&out)?;
    report.passed = consistent;
    report.summary = json!({
        "instance": inst.to_json()?,
        "empirical_min_N": empirical,
        "certified_N": certified,
        "consistent": consistent,
    });
    Ok(())
}

// ---- surface ----

#[derive(Serialize)]
struct OnsetRow {
    element: String,
    canonical: String,
    certified_onset: u64,
    certificate_n: Option<u64>,
    empirical_onset: u64,
    failures: Vec<u64>,
}

fn surface_onset(a: &OnsetArgs, report: &mut Report) -> Result<(), CliError> {
    let pres = make_presentation(a.r)?;
    let ball: Vec<_> = if a.radius == 0 { Vec::new() } else { pres.ball(a.radius)? };
    let mut homs = Vec::new();
    let mut out = Vec::new();
    for sw in &ball {
        let cert = onset_certified(&pres, sw)?;
        let mut failures = Vec::new();
        for n in cert.onset..=cert.onset + a.window {
            while homs.len() as u64 <= n {
                homs.push(pres.f_n_hom(homs.len() as u64));
            }
            if homs[n as usize].apply(&sw.canonical)?.is_identity() {
                failures.push(n);
            }
        }
        let empirical = onset_empirical(&pres, &sw.canonical, a.window, cert.onset + a.window)?;
        out.push(OnsetRow {
            element: pres.format(&sw.letters),
            canonical: pres.format(&sw.canonical),
            certified_onset: cert.onset,
            certificate_n: cert.certificate.as_ref().map(|c| c.n),
            empirical_onset: empirical,
            failures,
        });
    }
    let failed = out.iter().filter(|r| !r.failures.is_empty() || r.empirical_onset > r.certified_onset).count();
    report.passed = failed == 0;
    report.summary = json!({
        "genus": pres.genus(),
        "elements": out.len(),
        "failed": failed,
        "max_certified_onset": out.iter().map(|r| r.certified_onset).max().unwrap_or(0),
        "max_empirical_onset": out.iter().map(|r| r.empirical_onset).max().unwrap_or(0),
    });
    report.rows = rows(&out)?;
    Ok(())
}

#[derive(Serialize)]
struct TwistRow {
    n: u64,
    rho_matches_f_n_on_generators: bool,
    relator_image_trivial: bool,
    sampled: u64,
    closed_form_mismatches: u64,
}

fn twist_audit(a: &TwistAuditArgs, seed: u64, report: &mut Report) -> Result<(), CliError> {
    let pres = make_presentation(a.r)?;
    let rank = pres.rank();
    let gens: Vec<FreeWord> = (1..=rank).map(|g| FreeWord::generator(rank, g.into())).collect::<Result<_, _>>()?;
    let fold_kills_relator = pres.fold(pres.relator())?.is_identity();
    let mut commute = true;
    for g in &gens {
        commute &= pres.twist_sigma(&pres.twist_tau(g)?)? == pres.twist_tau(&pres.twist_sigma(g)?)?;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 0..=a.n_max {
        let f_n = pres.f_n_hom(n);
        let mut rho_ok = true;
        for g in &gens {
            rho_ok &= pres.rho_power_symbolic(g, n)? == f_n.apply(g)?;
        }
        let mut mismatches = 0;
        for _ in 0..a.samples {
            let len = rng.gen_range(0..=a.word_length);
            let letters: Vec<i64> =
                (0..len).map(|_| rng.gen_range(1..=i64::from(rank)) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            let w = FreeWord::reduce(rank, letters)?;
            let mut iterated = w.clone();
            for _ in 0..n {
                iterated = pres.twist_sigma(&pres.twist_tau(&iterated)?)?;
            }
            if pres.fold(&iterated)? != f_n.apply(&w)? {
                mismatches += 1;
            }
        }
        out.push(TwistRow {
            n,
            rho_matches_f_n_on_generators: rho_ok,
            relator_image_trivial: f_n.apply(pres.relator())?.is_identity(),
            sampled: a.samples,
            closed_form_mismatches: mismatches,
        });
    }
    let rows_ok =
        out.iter().all(|r| r.rho_matches_f_n_on_generators && r.relator_image_trivial && r.closed_form_mismatches == 0);
    report.passed = fold_kills_relator && commute && rows_ok;
    report.summary = json!({
        "genus": pres.genus(),
        "fold_kills_relator": fold_kills_relator,
        "twists_commute_on_generators": commute,
        "all_rows_pass": rows_ok,
    });
    report.rows = rows(&out)?;
    Ok(())
}

// ---- doubles ----

fn load_double(s: &DoubleSource) -> Result<DoubleSpec, CliError> {
    if let Some(path) = &s.double {
        return Ok(DoubleSpec::from_data(&read_json::<DoubleSpecData>(path)?)?);
    }
    let rank = s.rank.unwrap_or(2);
    let edge = FreeWord::parse(s.edge.as_deref().unwrap_or("[x1,x2]"), rank)?;
    Ok(match s.kind.unwrap_or(Kind::Amalgam) {
        Kind::Amalgam => double_of_free(rank, &edge)?,
        Kind::Hnn => hnn_of_free(rank, &edge)?,
    })
}

fn summarize_scan(out: &[ScanRow]) -> Value {
    json!({
        "elements": out.len(),
        "failed": out.iter().filter(|r| !r.passed()).count(),
        "max_certified_onset": out.iter().map(|r| r.certified_onset).max().unwrap_or(0),
        "max_empirical_onset": out.iter().map(|r| r.empirical_onset).max().unwrap_or(0),
    })
}

fn double_scan(a: &ScanArgs, report: &mut Report) -> Result<(), CliError> {
    let out = if let (Some(ea), Some(eb)) = (&a.extend_a, &a.extend_b) {
        let n = a.source.rank.unwrap_or(2);
        let ext = RankExtension::new(n, FreeWord::parse(ea, n)?, FreeWord::parse(eb, n)?)?;
        let words = nontrivial_words(n + 1, a.length as usize);
        let out = ext.scan(&words, a.window)?;
        report.summary = json!({ "mode": "extension", "n": n });
        out
    } else {
        let spec = load_double(&a.source)?;
        let forms = enumerate_reduced(&spec, a.syllables as usize, a.length as usize)?;
        let out = scan_double(&spec, &forms, a.window)?;
        report.summary = json!({ "mode": "double", "double": spec.to_data() });
        out
    };
    if let (Value::Object(m), Value::Object(s)) = (&mut report.summary, summarize_scan(&out)) {
        m.extend(s);
    }
    report.passed = out.iter().all(ScanRow::passed);
    report.rows = rows(&out)?;
    Ok(())
}

fn residual(a: &F2xF2Args, report: &mut Report) -> Result<(), CliError> {
    let r = f2xf2_nonseparable(&FreeWord::parse(&a.w, 2)?, &FreeWord::parse(&a.w_prime, 2)?, a.cap)?;
    report.passed = r.nonseparable && r.collapse_violations == 0;
    report.summary = serde_json::to_value(&r)?;
    Ok(())
}

// ---- matrices ----

fn load_gens(group: &Sl2ModPk, path: Option<&Path>) -> Result<Vec<Mat2ModPk>, CliError> {
    match path {
        Some(p) => {
            let raw: Vec<[i64; 4]> = read_json(p)?;
            Ok(raw.into_iter().map(|e| group.element(e)).collect::<Result<_, _>>()?)
        }
        None => {
            let (x, y) = group.search_generating_pair()?;
            Ok(vec![x, y])
        }
    }
}

#[derive(Serialize)]
struct HkRow {
    k: Mat2ModPk,
    power: usize,
    surjective: bool,
    killed: usize,
    killed_examples: Vec<String>,
}

fn padic_hk(a: &HkArgs, report: &mut Report) -> Result<(), CliError> {
    let group = sl2_modpk_ops(a.p, a.k)?;
    let spec = load_double(&a.source)?;
    let gens = load_gens(&group, a.gens.as_deref())?;
    if gens.len() != spec.target_rank() as usize {
        return Err(CliError::Usage(format!(
            "{} generator images given for a fold target of rank {}",
            gens.len(),
            spec.target_rank()
        )));
    }
    let order = group.order().expect("finite");
    let phi = HomInstance::through_free(&group, spec.presentation(), spec.fold(), &gens)?;
    let c = phi.apply(&group, &spec.embed_vertex(0, spec.edge())?)?;
    let alphabet = spec.alphabet();
    let ball: Vec<FreeWord> = enumerate_reduced(&spec, a.syllables as usize, a.length as usize)?
        .into_iter()
        .filter(|f| f.syllable_count() == a.syllables as usize)
        .map(|f| f.word(&spec))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (power, k) in cyclic_closure(&group, &c)?.into_iter().enumerate() {
        let h = h_k_family(&group, &spec, &phi, &k)?;
        let surjective = generated_subgroup(&group, h.images(), order)?.len() as u64 == order;
        let killed = injectivity_on_ball(&group, &h, &ball)?;
        out.push(HkRow {
            k,
            power,
            surjective,
            killed: killed.len(),
            killed_examples: killed.iter().take(5).map(|w| w.to_text_with(&alphabet)).collect(),
        });
    }
    let clean = out.iter().filter(|r| r.killed == 0).count();
    let all_surjective = out.iter().all(|r| r.surjective);
    report.passed = all_surjective && clean > 0;
    report.summary = json!({
        "modulus": group.modulus(),
        "group_order": order,
        "double": spec.to_data(),
        "target_images": gens,
        "edge_image": c,
        "closure_size": out.len(),
        "ball_size": ball.len(),
        "all_relators_pass": true,
        "all_surjective": all_surjective,
        "clean_k": clean,
    });
    report.rows = rows(&out)?;
    Ok(())
}

fn padic_surject(a: &SurjectArgs, report: &mut Report) -> Result<(), CliError> {
    let group = sl2_modpk_ops(a.p, a.k)?;
    let gens = load_gens(&group, a.gens.as_deref())?;
    let order = group.order().expect("finite");
    let closure = generated_subgroup(&group, &gens, order)?.len() as u64;
    let mut levels = BTreeMap::new();
    for j in 1..=a.k {
        let g = sl2_modpk_ops(a.p, j)?;
        let reduced: Vec<Mat2ModPk> =
            gens.iter().map(|m| g.element(m.entries().map(i64::from))).collect::<Result<_, _>>()?;
        let size = generated_subgroup(&g, &reduced, g.group_order())?.len() as u64;
        levels.insert(format!("mod {}^{j}", a.p), json!({ "closure_size": size, "order": g.group_order() }));
    }
    report.passed = true;
    report.summary = json!({
        "gens": gens,
        "group_order": order,
        "closure_size": closure,
        "surjective": closure == order,
        "levels": levels,
    });
    Ok(())
}

fn parse_matrix(s: &str) -> Result<Mat2Int, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("matrix entry {x:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let e: [i64; 4] = v.try_into().map_err(|_| CliError::Usage(format!("{s:?} needs four entries")))?;
    Ok(Mat2Int::from_i64(e)?)
}

#[derive(Serialize)]
struct FreeRow {
    max_len: usize,
    free: bool,
}

fn padic_freepair(a: &FreePairArgs, report: &mut Report) -> Result<(), CliError> {
    let (x, y) = (parse_matrix(&a.a)?, parse_matrix(&a.b)?);
    let relation = find_relation(&x, &y, a.max_len);
    let shortest = relation.as_ref().map(FreeWord::len);
    let out: Vec<FreeRow> =
        (0..=a.max_len).map(|l| FreeRow { max_len: l, free: shortest.is_none_or(|s| s > l) }).collect();
    report.passed = true;
    report.summary = json!({
        "a": x,
        "b": y,
        "free": relation.is_none(),
        "shortest_relation": relation.map(|w| w.to_string()),
    });
    report.rows = rows(&out)?;
    Ok(())
}
