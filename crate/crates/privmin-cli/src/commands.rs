//! Subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use privmin_core::{
    baseline_similarity, estimate_similarity_with, load_corpus, parse_signature_line,
    private_minhash_signature, privmin_signature, run_experiment, shingle, write_signature_line,
    Algorithm, ApproxQuery, CorpusFormat, Document, DpsoQuery, Error, ExperimentConfig,
    MatchMode, Normalizer, PairSelection, RandomSource, ShingleConfig, ShingleUnit, Signature,
    UsefulnessQuery,
};

use crate::{AnalyzeArgs, CompareArgs, ExperimentArgs, ShingleArgs, SketchArgs};

/// Errors split by exit code: data problems exit 1, usage problems exit 2.
#[derive(Debug)]
pub enum CliError {
    Data(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("PRIVMIN_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(42)
}

fn shingle_config(args: &ShingleArgs) -> Result<ShingleConfig, CliError> {
    let unit = match args.shingle_unit.as_str() {
        "word" => ShingleUnit::Word,
        "char" => ShingleUnit::Character,
        other => return Err(CliError::Usage(format!("unknown shingle unit {other:?}"))),
    };
    ShingleConfig::new(unit, args.shingle_width, Normalizer::LowercaseCollapse)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn corpus_format(path: &Path, flag: &Option<String>) -> Result<CorpusFormat, CliError> {
    match flag.as_deref() {
        Some("lines") => Ok(CorpusFormat::OneDocPerLine),
        Some("dir") => Ok(CorpusFormat::OneDocPerFile),
        Some(other) => Err(CliError::Usage(format!("unknown format {other:?}"))),
        None => Ok(if path.is_dir() {
            CorpusFormat::OneDocPerFile
        } else {
            CorpusFormat::OneDocPerLine
        }),
    }
}

fn load_documents(path: &Path, flag: &Option<String>) -> Result<Vec<Document>, CliError> {
    let format = corpus_format(path, flag)?;
    let loaded = load_corpus(path, format)?;
    for id in &loaded.skipped {
        eprintln!("warning: skipped document {id} (invalid UTF-8)");
    }
    Ok(loaded.documents)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Data(format!("stdout: {e}")))
        }
    }
}

pub fn sketch(args: SketchArgs) -> Result<(), CliError> {
    if args.algorithm != "plain" && args.epsilon.is_none() {
        return Err(CliError::Usage(format!(
            "--epsilon is required for --algorithm {}",
            args.algorithm
        )));
    }
    if let Some(eps) = args.epsilon {
        if eps <= 0.0 || !eps.is_finite() {
            return Err(CliError::Usage(format!(
                "--epsilon must be positive, got {eps}"
            )));
        }
    }
    if let Some(p_r) = args.p_r {
        if !(0.0..=1.0).contains(&p_r) {
            return Err(CliError::Usage(format!(
                "--p-r must be a probability in [0, 1], got {p_r}"
            )));
        }
    }
    let seed = resolve_seed(args.seed);
    let cfg = shingle_config(&args.shingle)?;
    let documents = load_documents(&args.input, &args.format)?;
    if documents.is_empty() {
        return Err(CliError::Data("corpus is empty".into()));
    }

    let family = privmin_core::HashFamily::new(args.k, seed)?;
    let root = RandomSource::new(seed);
    let mut lines = String::new();
    let mut audit_lines = String::new();
    let mut signed = 0usize;
    for (d, doc) in documents.iter().enumerate() {
        let profile = shingle(doc, &cfg);
        if profile.is_empty() {
            eprintln!("warning: skipped document {} (empty profile)", doc.id);
            continue;
        }
        let mut rng = root.substream(&[0xD0C, d as u64]);
        let signature = match args.algorithm.as_str() {
            "plain" => family.signature(&profile)?,
            "exp-all" => {
                private_minhash_signature(&profile, &family, args.epsilon.unwrap(), &mut rng)?
            }
            "privmin" => {
                let report = privmin_signature(
                    &profile,
                    &family,
                    args.epsilon.unwrap(),
                    args.p_r,
                    &mut rng,
                )?;
                if args.audit.is_some() {
                    let record = report.audit_record(&doc.id);
                    audit_lines.push_str(&serde_json::to_string(&record).map_err(|e| {
                        CliError::Data(format!("cannot serialize audit record: {e}"))
                    })?);
                    audit_lines.push('\n');
                }
                report.signature
            }
            other => return Err(CliError::Usage(format!("unknown algorithm {other:?}"))),
        };
        lines.push_str(&write_signature_line(&doc.id, &signature)?);
        lines.push('\n');
        signed += 1;
    }
    if signed == 0 {
        return Err(CliError::Data(
            "no document produced a non-empty profile".into(),
        ));
    }
    if let Some(audit_path) = &args.audit {
        fs::write(audit_path, audit_lines)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", audit_path.display())))?;
    }
    write_output(&args.out, &lines)
}

fn read_signatures(path: &Path) -> Result<Vec<(String, Signature)>, CliError> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    content
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_signature_line(l).map_err(CliError::from))
        .collect()
}

pub fn compare(args: CompareArgs) -> Result<(), CliError> {
    let mode = match args.match_mode.as_str() {
        "positional" => MatchMode::Positional,
        "value-set" => MatchMode::ValueSet,
        other => return Err(CliError::Usage(format!("unknown match mode {other:?}"))),
    };
    let sigs_a = read_signatures(&args.file_a)?;
    if sigs_a.is_empty() {
        return Err(CliError::Data(format!(
            "{} holds no signatures",
            args.file_a.display()
        )));
    }

    // Build the pair list: row-by-row across two files, or within one file.
    let pairs: Vec<((String, Signature), (String, Signature))> = match &args.file_b {
        Some(file_b) => {
            let sigs_b = read_signatures(file_b)?;
            if sigs_a.len() != sigs_b.len() {
                return Err(CliError::Data(format!(
                    "signature files differ in length: {} vs {}",
                    sigs_a.len(),
                    sigs_b.len()
                )));
            }
            sigs_a.into_iter().zip(sigs_b).collect()
        }
        None => match args.pairs.as_str() {
            "consecutive" => sigs_a
                .chunks(2)
                .filter(|c| c.len() == 2)
                .map(|c| (c[0].clone(), c[1].clone()))
                .collect(),
            "all" => {
                let mut v = Vec::new();
                for i in 0..sigs_a.len() {
                    for j in (i + 1)..sigs_a.len() {
                        v.push((sigs_a[i].clone(), sigs_a[j].clone()));
                    }
                }
                v
            }
            other => return Err(CliError::Usage(format!("unknown pairing {other:?}"))),
        },
    };
    if pairs.is_empty() {
        return Err(CliError::Data("no pairs to compare".into()));
    }

    let seed = resolve_seed(args.seed);
    let root = RandomSource::new(seed);
    let mut out = String::from("id_a,id_b,similarity\n");
    for (pi, ((id_a, sig_a), (id_b, sig_b))) in pairs.iter().enumerate() {
        let value = match args.baseline_epsilon {
            Some(eps) => {
                let mut rng = root.substream(&[0xBA5E, pi as u64]);
                baseline_similarity(sig_a, sig_b, eps, &mut rng)?
            }
            None => estimate_similarity_with(sig_a, sig_b, mode)?,
        };
        out.push_str(&format!(
            "{},{},{}\n",
            id_a,
            id_b,
            privmin_core::eval::fmt_sig6(value)
        ));
    }
    print!("{out}");
    Ok(())
}

fn parse_f64_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |s: &str| CliError::Usage(format!("cannot parse grid value {s:?}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "grid {spec:?} must be start:stop:step"
            )));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad(parts[0]))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad(parts[1]))?;
        let step: f64 = parts[2].parse().map_err(|_| bad(parts[2]))?;
        if step <= 0.0 || !step.is_finite() {
            return Err(CliError::Usage("grid step must be positive".into()));
        }
        let mut values = Vec::new();
        let mut i = 0u32;
        loop {
            let x = start + f64::from(i) * step;
            if x > stop + 1e-9 {
                break;
            }
            values.push(x);
            i += 1;
        }
        if values.is_empty() {
            return Err(CliError::Usage(format!("grid {spec:?} is empty")));
        }
        Ok(values)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(s)))
            .collect()
    }
}

fn parse_usize_grid(spec: &str) -> Result<Vec<usize>, CliError> {
    let values = parse_f64_grid(spec)?;
    values
        .into_iter()
        .map(|x| {
            let k = x.round();
            if (x - k).abs() > 1e-9 || k < 1.0 {
                Err(CliError::Usage(format!("K grid value {x} is not a positive integer")))
            } else {
                Ok(k as usize)
            }
        })
        .collect()
}

fn parse_pairs(spec: &str) -> Result<PairSelection, CliError> {
    match spec {
        "consecutive" => Ok(PairSelection::Consecutive),
        "all" => Ok(PairSelection::AllPairs),
        other => {
            if let Some(n) = other.strip_prefix("sampled:") {
                let n: usize = n
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad sampled pair count {n:?}")))?;
                Ok(PairSelection::SampledN(n))
            } else {
                Err(CliError::Usage(format!("unknown pairing {other:?}")))
            }
        }
    }
}

fn preset_threshold(preset: &str) -> Result<f64, CliError> {
    match preset {
        "alpine" => Ok(0.5),
        "bbc" => Ok(0.4),
        "opinosis" => Ok(0.5),
        "msrp" => Ok(0.3),
        other => Err(CliError::Usage(format!("unknown preset {other:?}"))),
    }
}

pub fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let threshold = match (&args.preset, args.threshold) {
        (Some(p), None) => preset_threshold(p)?,
        (None, Some(t)) => t,
        (None, None) => 0.5,
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    let algorithm = Algorithm::parse(&args.algorithm).map_err(|e| CliError::Usage(e.to_string()))?;
    let documents = load_documents(&args.input, &args.format)?;
    let dataset = args.dataset.clone().unwrap_or_else(|| {
        args.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "corpus".into())
    });
    let cfg = ExperimentConfig {
        algorithm,
        dataset,
        epsilon_grid: parse_f64_grid(&args.epsilon_grid)?,
        k_grid: parse_usize_grid(&args.k_grid)?,
        threshold,
        repetitions: args.reps,
        master_seed: resolve_seed(args.seed),
        pair_selection: parse_pairs(&args.pairs)?,
        shingle: shingle_config(&args.shingle)?,
        no_timing: args.no_timing,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let threads = args.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Data(format!("cannot build thread pool: {e}")))?;
    let report = pool.install(|| run_experiment(&documents, &cfg))?;
    write_output(&args.out, &report.to_csv())
}

fn parse_numbers(label: &str, raw: &[String]) -> Result<Vec<f64>, CliError> {
    raw.iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{label}: cannot parse {s:?}")))
        })
        .collect()
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    // Range violations are usage errors here (exit 2).
    let usage = |e: Error| CliError::Usage(e.to_string());
    if let Some(raw) = &args.approx {
        let v = parse_numbers("--approx", raw)?;
        let k = v[0] as usize;
        let q = ApproxQuery::new(k, v[1], v[2]).map_err(usage)?;
        let p = privmin_core::approx_probability(&q);
        println!("metric,K,sigma,theta,value");
        println!(
            "approx,{},{},{},{}",
            k,
            fmt(v[1]),
            fmt(v[2]),
            fmt(p)
        );
        return Ok(());
    }
    if let Some(raw) = &args.dpso {
        let v = parse_numbers("--dpso", raw)?;
        let q = DpsoQuery::new(v[0] as usize, v[1], v[2], v[3], v[4] as usize).map_err(usage)?;
        let eps = privmin_core::conditional_dpso_epsilon(&q)?;
        println!("metric,K,sigma,sigma_prime,theta,n,epsilon");
        println!(
            "dpso,{},{},{},{},{},{}",
            v[0] as usize,
            fmt(v[1]),
            fmt(v[2]),
            fmt(v[3]),
            v[4] as usize,
            fmt(eps)
        );
        return Ok(());
    }
    if let Some(raw) = &args.usefulness {
        let v = parse_numbers("--usefulness", raw)?;
        let q = UsefulnessQuery::new(v[0], v[1], v[2]).map_err(usage)?;
        let out = privmin_core::usefulness_bound(&q);
        println!("metric,P_t,alpha,delta,lhs,satisfied");
        println!(
            "usefulness,{},{},{},{},{}",
            fmt(v[0]),
            fmt(v[1]),
            fmt(v[2]),
            fmt(out.lhs),
            out.satisfied
        );
        return Ok(());
    }
    Err(CliError::Usage(
        "one of --approx, --dpso, --usefulness is required".into(),
    ))
}

fn fmt(x: f64) -> String {
    privmin_core::eval::fmt_sig6(x)
}
