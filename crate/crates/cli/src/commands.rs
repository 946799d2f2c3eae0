use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revsynth_core::bitspace::format_bits;
use revsynth_core::bounds::{self, ASYMPTOTIC_NOTE};
use revsynth_core::oracle::{self, BfsAtlas};
use revsynth_core::{
    census, find_counterexample, is_realizable, min_ancilla, synthesize_mapping, BoolMapping,
    Circuit, Error,
};

use crate::{Format, SynthArgs};

/// Exit statuses.
pub const PASS: u8 = 0;
pub const FAIL: u8 = 1;
pub const USAGE: u8 = 2;
pub const UNREALIZABLE: u8 = 3;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InsufficientAncilla { .. } | Error::OddPermutationNoAncilla { .. } => {
                UNREALIZABLE
            }
            _ => USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn with_path(path: &Path, err: Error) -> CliError {
    let mut cli: CliError = err.into();
    cli.message = format!("{}: {}", path.display(), cli.message);
    cli
}

fn load_mapping(path: &Path) -> Result<BoolMapping, CliError> {
    BoolMapping::parse(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    Circuit::parse(&read(path)?).map_err(|e| with_path(path, e))
}

pub fn analyze(input: &Path, format: Format) -> CmdResult {
    let f = load_mapping(input)?;
    let n = f.n();
    let c = census(&f);
    let q_min = min_ancilla(&f);
    let parity = f
        .to_permutation()
        .map_or_else(|| "-".to_string(), |p| p.parity().to_string());

    let mut fields: Vec<(String, String)> = vec![
        ("n".into(), n.to_string()),
        ("d".into(), c.d.to_string()),
        ("image_size".into(), c.image_size().to_string()),
        ("bijective".into(), f.is_bijective().to_string()),
        ("parity".into(), parity),
        ("min_ancilla".into(), q_min.to_string()),
    ];
    for (y, &size) in c.sizes.iter().enumerate() {
        fields.push((format!("preimages {}", format_bits(y as u32, n)), size.to_string()));
    }
    for q in 0..=n {
        fields.push((format!("realizable q={q}"), is_realizable(&f, q).to_string()));
    }

    let mut out = String::new();
    match format {
        Format::Text => {
            for (k, v) in fields {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        Format::Csv => {
            out.push_str("field,value\n");
            for (k, v) in fields {
                let _ = writeln!(out, "{},{v}", k.replace(' ', "_").replace('=', ""));
            }
        }
    }
    print!("{out}");
    Ok(ExitCode::from(PASS))
}

fn bound_or_na(value: revsynth_core::Result<f64>) -> String {
    value.map_or_else(|_| "n/a".to_string(), |v| format!("{v:.2}"))
}

pub fn synth(args: &SynthArgs) -> CmdResult {
    let f = load_mapping(&args.input)?;
    let n = f.n();
    let q_min = min_ancilla(&f);
    let q = args.q.unwrap_or(q_min);
    if q < q_min {
        let d = census(&f).d;
        return Err(CliError {
            code: UNREALIZABLE,
            message: format!(
                "unrealizable with q={q}: this mapping requires q={q_min} (max preimage count d={d})"
            ),
        });
    }
    let (circuit, report, embedding) = synthesize_mapping(&f, q)?;
    let counterexample = find_counterexample(&f, &circuit)?;
    let verified = counterexample.is_none() && circuit.is_omega2();

    let mut text = String::new();
    let _ = writeln!(text, "n={n}");
    let _ = writeln!(text, "q={q}");
    let _ = writeln!(text, "lines={}", n + q);
    let _ = writeln!(text, "min_ancilla={q_min}");
    let _ = writeln!(text, "moving_points={}", embedding.moving_count);
    let _ = writeln!(text, "chains={}", embedding.chains.len());
    let _ = writeln!(text, "parity_fix={}", embedding.parity_fix);
    text.push_str(&report.to_string());
    let _ = writeln!(text, "depth={}", circuit.depth());
    let _ = writeln!(text, "L={}", circuit.complexity());
    let _ = writeln!(
        text,
        "lower_bound={}",
        bound_or_na(bounds::lower_bound(n as u32, q as u32))
    );
    let _ = writeln!(
        text,
        "upper_bound_t1={}",
        bound_or_na(bounds::upper_bound_t1(n as u32))
    );
    let _ = writeln!(text, "bound_note={ASYMPTOTIC_NOTE}");
    let _ = writeln!(text, "verified={verified}");

    if let Some(path) = &args.embedding {
        write(path, embedding.serialize().as_bytes())?;
    }
    match &args.out {
        Some(path) => {
            write(path, circuit.serialize().as_bytes())?;
            print!("{text}");
        }
        None => {
            print!("{}", circuit.serialize());
            eprint!("{text}");
        }
    }
    Ok(ExitCode::from(if verified { PASS } else { FAIL }))
}

pub fn verify(mapping: &Path, circuit: &Path) -> CmdResult {
    let f = load_mapping(mapping)?;
    let c = load_circuit(circuit)?;
    let n = f.n();
    if c.significant() != n {
        return Err(CliError::usage(format!(
            "mapping has n={n} but the circuit declares {} significant lines",
            c.significant()
        )));
    }
    match find_counterexample(&f, &c)? {
        None => {
            println!("pass: all {} inputs match", 1u32 << n);
            Ok(ExitCode::from(PASS))
        }
        Some(x) => {
            let got = c.simulate_value(x) & ((1 << n) - 1);
            println!(
                "fail: input {} gives {}, expected {}",
                format_bits(x, n),
                format_bits(got, n),
                format_bits(f.apply(x), n)
            );
            Ok(ExitCode::from(FAIL))
        }
    }
}

/// `A` or inclusive `A..B`.
pub fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u32>, CliError> {
    let bad = || CliError::usage(format!("invalid range {text:?}, expected A or A..B"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

pub fn bounds(n: &str, q: &str, format: Format) -> CmdResult {
    let rows = bounds::bound_rows(parse_range(n)?, parse_range(q)?)?;
    match format {
        Format::Text => print!("{}", bounds::format_text(&rows)),
        Format::Csv => print!("{}", bounds::format_csv(&rows)),
    }
    Ok(ExitCode::from(PASS))
}

fn build_any_atlas(m: usize, max_gates: u32) -> Result<BfsAtlas, CliError> {
    let atlas = if m <= oracle::MAX_FULL_WIDTH {
        oracle::build_atlas(m)?
    } else {
        oracle::build_atlas_bounded(m, max_gates)?
    };
    Ok(atlas)
}

pub fn oracle_build(m: usize, max_gates: u32, out: Option<&Path>) -> CmdResult {
    let atlas = build_any_atlas(m, max_gates)?;
    let histogram: Vec<String> = atlas
        .histogram()
        .iter()
        .enumerate()
        .map(|(d, count)| format!("{d}:{count}"))
        .collect();
    println!(
        "atlas m={} entries={} complete={} max_distance={}",
        atlas.m(),
        atlas.len(),
        atlas.is_complete(),
        atlas.max_distance()
    );
    println!("histogram {}", histogram.join(" "));
    if let Some(path) = out {
        let mut buf = Vec::new();
        atlas.write_to(&mut buf)?;
        write(path, &buf)?;
    }
    Ok(ExitCode::from(PASS))
}

pub fn oracle_query(circuit: &Path, atlas: Option<&Path>, max_gates: u32) -> CmdResult {
    let c = load_circuit(circuit)?;
    let atlas = match atlas {
        Some(path) => {
            let bytes = fs::read(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            BfsAtlas::read_from(&mut bytes.as_slice()).map_err(|e| with_path(path, e))?
        }
        None => build_any_atlas(c.lines(), max_gates)?,
    };
    let p = c.permutation();
    match oracle::min_gates(&atlas, &p) {
        Ok(d) => {
            println!("min_gates={d} circuit_gates={}", c.complexity());
            Ok(ExitCode::from(PASS))
        }
        Err(Error::Unreachable) => {
            println!(
                "not reached within {} gates",
                atlas.max_gates().map_or("any".to_string(), |b| b.to_string())
            );
            Ok(ExitCode::from(FAIL))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn check_a1(input: &Path, q: usize) -> CmdResult {
    let f = load_mapping(input)?;
    let impossible = oracle::confirm_assertion1(&f, q)?;
    let q_min = min_ancilla(&f);
    if impossible {
        println!("unrealizable, q_min={q_min}");
    } else {
        println!("realizable, q_min={q_min}");
    }
    Ok(ExitCode::from(PASS))
}

pub fn random(n: usize, seed: u64, out: Option<&Path>) -> CmdResult {
    if n > 16 {
        return Err(CliError::usage("random tables are limited to n <= 16"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1u32 << n;
    let f = BoolMapping::new(n, (0..size).map(|_| rng.gen_range(0..size)).collect())?;
    match out {
        Some(path) => write(path, f.serialize().as_bytes())?,
        None => print!("{}", f.serialize()),
    }
    Ok(ExitCode::from(PASS))
}

pub fn batch(n: usize, count: usize, seed: u64, format: Format) -> CmdResult {
    if n == 0 || n > 8 {
        return Err(CliError::usage("batch needs 1 <= n <= 8"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1u32 << n;
    let header = ["index", "n", "q", "d", "moving_points", "L", "depth", "lower_bound", "upper_bound_t1", "verified"];
    let mut rows = Vec::with_capacity(count);
    let mut all_ok = true;
    for i in 0..count {
        let f = BoolMapping::new(n, (0..size).map(|_| rng.gen_range(0..size)).collect())?;
        let q = min_ancilla(&f);
        let (c, _, e) = synthesize_mapping(&f, q)?;
        let ok = find_counterexample(&f, &c)?.is_none() && c.is_omega2();
        all_ok &= ok;
        rows.push([
            i.to_string(),
            n.to_string(),
            q.to_string(),
            census(&f).d.to_string(),
            e.moving_count.to_string(),
            c.complexity().to_string(),
            c.depth().to_string(),
            bound_or_na(bounds::lower_bound(n as u32, q as u32)),
            bound_or_na(bounds::upper_bound_t1(n as u32)),
            ok.to_string(),
        ]);
    }
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "{}", header.join(","));
            for r in &rows {
                let _ = writeln!(out, "{}", r.join(","));
            }
        }
        Format::Text => {
            let _ = writeln!(out, "# bounds: {ASYMPTOTIC_NOTE}");
            let _ = writeln!(out, "{}", header.map(|h| format!("{h:>14}")).join(" "));
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|c| format!("{c:>14}")).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
    }
    print!("{out}");
    Ok(ExitCode::from(if all_ok { PASS } else { FAIL }))
}
