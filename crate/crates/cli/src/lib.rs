//! Command implementations behind the `absreg` binary. Each command writes
//! its report to the given writer so it can be exercised without spawning a
//! process.

pub mod spec;

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use absreg::bloch::{decompose_tripartite, Pair};
use absreg::channels::Sidedness;
use absreg::classify::{classify, marginal_acre2nn, ClassificationReport, Verdict};
use absreg::entropy::{check_alpha, conditional_renyi, conditional_von_neumann};
use absreg::linalg::haar_unitary_with;
use absreg::states::DensityMatrix;
use absreg::swap::{scan_family, success_counts, SwapFamily, LABELS};
use absreg::sweep::{emit_csv, format_sig, Field, Table};
use absreg::tables;

use crate::spec::{build_channel, build_state, parse_spec, SpecError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("computation failed: {0}")]
    Compute(#[from] absreg::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for computation and I/O failures, 2 for bad invocations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub const DEFAULT_ALPHAS: [f64; 2] = [0.5, 2.0];

fn check_alphas(alphas: &[f64]) -> CliResult {
    for &a in alphas {
        check_alpha(a).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

/// Parse the state, reduce to `marginal` if given, then apply the channel.
pub fn prepare_state(state: &str, channel: Option<&str>, marginal: Option<&str>) -> CliResult<(DensityMatrix, Option<Verdict>)> {
    let rho = build_state(&parse_spec(state).map_err(SpecError::from)?)?;
    let (rho, bloch) = match (rho.dims().len(), marginal) {
        (3, Some(m)) => {
            let pair: Pair = m.parse().map_err(|e: absreg::Error| CliError::Usage(e.to_string()))?;
            let bloch = marginal_acre2nn(&decompose_tripartite(&rho)?, pair);
            (rho.reduce(&pair.kept())?, Some(bloch))
        }
        (3, None) => return Err(CliError::Usage("tripartite state needs --marginal 23|13|12".into())),
        (_, Some(_)) => return Err(CliError::Usage("--marginal only applies to tripartite states".into())),
        (_, None) => (rho, None),
    };
    let rho = match channel {
        Some(c) => {
            let ch = build_channel(&parse_spec(c).map_err(SpecError::from)?)?;
            ch.apply(&rho).map_err(|e| CliError::Usage(format!("channel {c}: {e}")))?
        }
        None => rho,
    };
    Ok((rho, bloch))
}

fn verdict_rows(report: &ClassificationReport, bloch: Option<Verdict>) -> Vec<(String, Option<f64>, Verdict)> {
    let mut rows = vec![
        ("AFEF".to_string(), None, report.afef),
        ("ACVENN".to_string(), None, report.acvenn),
    ];
    for &(alpha, v) in &report.acrenn {
        rows.push(("ACRENN".to_string(), Some(alpha), v));
    }
    rows.push(("ACRE2NN".to_string(), None, report.acre2nn));
    if let Some(v) = bloch {
        rows.push(("ACRE2NN-bloch".to_string(), None, v));
    }
    rows
}

pub struct ClassifyArgs<'a> {
    pub state: &'a str,
    pub channel: Option<&'a str>,
    pub alphas: &'a [f64],
    pub marginal: Option<&'a str>,
    pub csv: Option<&'a Path>,
}

pub fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> CliResult {
    check_alphas(args.alphas)?;
    let (rho, bloch) = prepare_state(args.state, args.channel, args.marginal)?;
    let report = classify(&rho, args.alphas).map_err(|e| match e {
        absreg::Error::DimensionMismatch(m) => CliError::Usage(m),
        other => CliError::Compute(other),
    })?;
    writeln!(out, "state: {}", args.state)?;
    if let Some(c) = args.channel {
        writeln!(out, "channel: {c}")?;
    }
    if let Some(m) = args.marginal {
        writeln!(out, "marginal: {m}")?;
    }
    writeln!(out, "local dimension: {}", report.local_dim)?;
    writeln!(out, "{:<16} {:<6} {:>16} {:>16}", "class", "member", "witness", "threshold")?;
    let rows = verdict_rows(&report, bloch);
    for (name, alpha, v) in &rows {
        let label = match alpha {
            Some(a) => format!("{name}({a})"),
            None => name.clone(),
        };
        writeln!(
            out,
            "{:<16} {:<6} {:>16} {:>16}",
            label,
            v.member,
            format_sig(v.witness),
            format_sig(v.threshold)
        )?;
    }
    if let Some(path) = args.csv {
        let mut t = Table::new(["class", "alpha", "member", "witness", "threshold"]);
        for (name, alpha, v) in rows {
            t.push(vec![
                name.into(),
                alpha.map_or(Field::Text(String::new()), Field::Num),
                v.member.into(),
                v.witness.into(),
                v.threshold.into(),
            ]);
        }
        emit_csv(&t, path)?;
    }
    Ok(())
}

fn write_table(table: &Table, path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => emit_csv(table, p)?,
        None => out.write_all(table.to_csv_string().as_bytes())?,
    }
    Ok(())
}

/// Which channel application(s) the channel table uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideChoice {
    Double,
    Single,
    Both,
}

pub fn cmd_table2(side: SideChoice, path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let sides: &[Sidedness] = match side {
        SideChoice::Double => &[Sidedness::Double],
        SideChoice::Single => &[Sidedness::Single],
        SideChoice::Both => &[Sidedness::Double, Sidedness::Single],
    };
    let mut rows = Vec::new();
    for &s in sides {
        rows.extend(tables::table2(s)?);
    }
    write_table(&tables::table2_csv(&rows), path, out)
}

pub fn cmd_table3(path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    write_table(&tables::table3_csv(&tables::table3()?), path, out)
}

pub fn cmd_table4(path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    write_table(&tables::table4_csv(&tables::table4()?), path, out)
}

/// Single-number boundaries: depolarised Bell pair, doubly amplitude
/// damped Bell pair, and the GHZ/W marginal purity root.
pub fn cmd_thresholds(path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let (ac, af) = tables::depolarized_thresholds()?;
    let amp = tables::amplitude_damping_ac();
    let ghz = tables::ghz_w_threshold()?;
    let mut t = Table::new(["quantity", "computed", "reference", "abs_diff"]);
    let mut row = |name: &str, computed: f64, reference: f64| {
        t.push(vec![name.into(), computed.into(), reference.into(), (computed - reference).abs().into()]);
    };
    row("depolarized_bell_ac_p_max", ac, 0.747614);
    row("depolarized_bell_af_p_max", af, 1.0 / 3.0);
    if let [iv] = amp.as_slice() {
        row("amplitude_damping_ac_lo", iv.lo, 0.267284);
        row("amplitude_damping_ac_hi", iv.hi, 0.732716);
    }
    row("ghz_w_acre2nn_p_min", ghz, tables::GHZ_W_PUBLISHED);
    row("ghz_w_acre2nn_p_min_exact", ghz, tables::GHZ_W_EXACT);
    write_table(&t, path, out)
}

pub const MAX_SCAN_GRID: usize = 200;

pub fn cmd_swap_scan(family: &str, fixed: Option<f64>, grid: usize, path: Option<&Path>, out: &mut dyn Write, log: &mut dyn Write) -> CliResult {
    if grid == 0 || grid > MAX_SCAN_GRID {
        return Err(CliError::Usage(format!("--grid must be in 1..={MAX_SCAN_GRID}")));
    }
    let spec = match fixed {
        Some(v) => format!("{family}:{v}"),
        None => family.to_string(),
    };
    let fam: SwapFamily = spec.parse().map_err(|e: absreg::Error| CliError::Usage(e.to_string()))?;
    let result = scan_family(fam, fam.axes(grid))?;
    let mut header: Vec<String> = fam.axis_names().iter().map(|s| s.to_string()).collect();
    header.extend(["S_ab", "S_bc"].map(String::from));
    header.extend(LABELS.iter().map(|l| format!("S_{l}")));
    header.extend(LABELS.iter().map(|l| format!("prob_{l}")));
    header.extend(LABELS.iter().map(|l| format!("success_{l}")));
    header.push("success".into());
    let mut t = Table::new(header);
    for (k, r) in result.values().iter().enumerate() {
        let mut row: Vec<Field> = result.coordinates(k).into_iter().map(Field::Num).collect();
        row.extend(r.input_entropies.iter().map(|&v| Field::Num(v)));
        row.extend(r.conditional_entropies.iter().map(|&v| Field::Num(v)));
        row.extend(r.probabilities.iter().map(|&v| Field::Num(v)));
        row.extend(r.per_outcome.iter().map(|&v| Field::Bool(v)));
        row.push(r.success.into());
        t.push(row);
    }
    write_table(&t, path, out)?;
    let (per, any) = success_counts(&result);
    writeln!(
        log,
        "{} ({}): {} of {} grid points succeed; per outcome 00={} 01={} 10={} 11={}",
        fam.name(),
        match fam {
            SwapFamily::GlobalDepolarizing { p2 } => format!("p2={p2}"),
            SwapFamily::AmplitudeDamping { p4 } => format!("p4={p4}"),
        },
        any,
        result.values().len(),
        per[0],
        per[1],
        per[2],
        per[3]
    )?;
    Ok(())
}

pub struct SampleArgs<'a> {
    pub state: &'a str,
    pub channel: Option<&'a str>,
    pub alphas: &'a [f64],
    pub unitaries: usize,
    pub seed: u64,
}

/// Conjugate the state by seeded Haar unitaries and report the smallest
/// conditional entropies seen next to the spectral verdicts.
pub fn cmd_sample(args: &SampleArgs, out: &mut dyn Write) -> CliResult {
    check_alphas(args.alphas)?;
    if args.unitaries == 0 {
        return Err(CliError::Usage("--unitaries must be at least 1".into()));
    }
    let (rho, _) = prepare_state(args.state, args.channel, None)?;
    let report = classify(&rho, args.alphas).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut min_vn = f64::INFINITY;
    let mut min_renyi = vec![f64::INFINITY; args.alphas.len()];
    for _ in 0..args.unitaries {
        let u = haar_unitary_with(rho.dim(), &mut rng);
        let rotated = rho.conjugate_by(&u)?;
        min_vn = min_vn.min(conditional_von_neumann(&rotated)?.value);
        for (m, &a) in min_renyi.iter_mut().zip(args.alphas) {
            *m = m.min(conditional_renyi(&rotated, a)?.value);
        }
    }
    writeln!(out, "state: {}", args.state)?;
    writeln!(out, "unitaries: {} (seed {})", args.unitaries, args.seed)?;
    writeln!(
        out,
        "ACVENN {}: min conditional von Neumann = {}",
        report.acvenn.member,
        format_sig(min_vn)
    )?;
    for ((alpha, v), m) in report.acrenn.iter().zip(&min_renyi) {
        writeln!(out, "ACRENN({alpha}) {}: min conditional Renyi = {}", v.member, format_sig(*m))?;
    }
    Ok(())
}
