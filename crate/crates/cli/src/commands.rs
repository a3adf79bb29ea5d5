use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use oneshot::catalysis::{catalytic_transform_check_capped, catd_threshold, embezzle_bit, embezzler, Catalyst};
use oneshot::entropies::{renyi_divergence, renyi_entropy, smooth_d_0, smooth_d_inf, smooth_h0, smooth_hinf, Alpha, SmoothingParameter};
use oneshot::fluctuation::{crooks_check, enumerate_forward, enumerate_reverse, jarzynski_estimate, WorkDistribution};
use oneshot::io::{parse_protocol, parse_state, StateFile};
use oneshot::states::{gibbs_state, hermitian_eigenvalues, InverseTemperature, QuasiState, DEFAULT_DIM_CAP};
use oneshot::thermal_ops::{lorenz_curve, second_laws_check, thermo_majorization_check};
use oneshot::work::{delta_f, smooth_work_cost, smooth_work_yield, work_cost, work_yield};
use serde_json::{json, Value};

use crate::table::{Cell, Table};
use crate::{Cli, Command, Format, Mode};

/// Tolerance for reading a density state as quasiclassical.
const QUASI_TOL: f64 = 1e-10;
/// Rényi orders used for the second-law witness search.
const WITNESS_ALPHAS: [f64; 9] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, f64::INFINITY];

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<oneshot::Error> for CliError {
    fn from(e: oneshot::Error) -> Self {
        use oneshot::Error::*;
        match e {
            DimensionTooLarge { .. } | CapExceeded { .. } | DetailedBalance(_) | NotThermalOperation(_) => {
                CliError::Compute(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> CliResult<StateFile> {
    parse_state(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_quasi(path: &Path) -> CliResult<QuasiState<f64>> {
    load_state(path)?
        .into_quasi(QUASI_TOL)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn dim_cap() -> CliResult<usize> {
    match std::env::var("ONESHOT_DIM_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("ONESHOT_DIM_CAP must be a positive integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

fn betas(cli: &Cli) -> CliResult<Vec<InverseTemperature<f64>>> {
    cli.beta.iter().map(|&b| Ok(InverseTemperature::new(b)?)).collect()
}

fn single_beta(cli: &Cli, command: &str) -> CliResult<InverseTemperature<f64>> {
    match betas(cli)?.as_slice() {
        [b] => Ok(*b),
        _ => Err(CliError::Input(format!("{command} takes a single --beta"))),
    }
}

fn alphas(cli: &Cli) -> CliResult<Vec<Alpha<f64>>> {
    cli.alpha.iter().map(|a| Ok(a.parse::<Alpha<f64>>()?)).collect()
}

fn eps(cli: &Cli) -> CliResult<SmoothingParameter<f64>> {
    Ok(SmoothingParameter::new(cli.eps)?)
}

fn create(path: &Path) -> CliResult<fs::File> {
    fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn sink(cli: &Cli) -> CliResult<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn io_error(e: impl fmt::Display) -> CliError {
    CliError::Input(format!("cannot write output: {e}"))
}

fn write_csv_to(path: &Path, table: &Table) -> CliResult<()> {
    table.write_csv(create(path)?).map_err(io_error)
}

/// Emits `json` or `table` depending on the requested format.
fn emit(cli: &Cli, json: Value, table: &Table) -> CliResult<()> {
    let mut out = sink(cli)?;
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &json).map_err(io_error)?;
            writeln!(out).map_err(io_error)
        }
        Format::Csv => table.write_csv(out).map_err(io_error),
    }
}

fn emit_table(cli: &Cli, table: &Table) -> CliResult<()> {
    emit(cli, table.to_json_value(), table)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Entropy { state } => entropy(cli, state),
        Command::Work { state } => work(cli, state),
        Command::Transform { p, q, catalyst, curve_out } => transform(cli, p, q, catalyst.as_deref(), curve_out.as_deref()),
        Command::Embezzle { n } => embezzle(cli, n),
        Command::Fluctuation { protocol, mode, samples, rev_out } => {
            fluctuation(cli, protocol, *mode, *samples, rev_out.as_deref())
        }
    }
}

fn entropy(cli: &Cli, path: &Path) -> CliResult<()> {
    let file = load_state(path)?;
    let alphas = alphas(cli)?;
    let eps = eps(cli)?;
    let units = cli.units;
    // spectrum for entropies; the energy-diagonal state, when there is one,
    // for divergences
    let (spectrum, quasi) = match &file {
        StateFile::Quasi(s) => (s.probs().to_vec(), Some(s.clone())),
        StateFile::Density(d) => {
            let spectrum = hermitian_eigenvalues(d.rho()).into_iter().map(|x| x.max(0.0)).collect();
            (spectrum, d.to_quasi(QUASI_TOL).ok())
        }
    };

    let mut columns = vec!["beta".to_string(), "units".to_string()];
    columns.extend(alphas.iter().map(|a| format!("H_{a}")));
    columns.extend(alphas.iter().map(|a| format!("D_{a}")));
    columns.extend(["eps", "H0_eps", "Hinf_eps", "D0_eps", "Dinf_eps"].map(String::from));
    let mut table = Table::new(columns);
    for beta in betas(cli)? {
        let gibbs = quasi.as_ref().map(|s| gibbs_state(s.energies(), beta));
        let divergence = |f: &dyn Fn(&[f64], &[f64]) -> f64| -> Cell {
            match (&quasi, &gibbs) {
                (Some(s), Some(g)) => Cell::Num(units.from_nats(f(s.probs(), g.probs()))),
                _ => Cell::Missing,
            }
        };
        let mut row: Vec<Cell> = vec![beta.value().into(), units.label().into()];
        row.extend(alphas.iter().map(|&a| Cell::Num(units.from_nats(renyi_entropy(&spectrum, a)))));
        row.extend(alphas.iter().map(|&a| divergence(&|p, q| renyi_divergence(p, q, a))));
        row.push(eps.value().into());
        row.push(units.from_nats(smooth_h0(&spectrum, eps)).into());
        row.push(units.from_nats(smooth_hinf(&spectrum, eps)).into());
        row.push(divergence(&|p, q| smooth_d_0(p, q, eps)));
        row.push(divergence(&|p, q| smooth_d_inf(p, q, eps)));
        table.push(row);
    }
    emit_table(cli, &table)
}

fn work(cli: &Cli, path: &Path) -> CliResult<()> {
    let s = load_quasi(path)?;
    let eps = eps(cli)?;
    let units = cli.units;
    let mut table = Table::new([
        "beta",
        "eps",
        "cost_energy",
        "yield_energy",
        "smooth_cost_energy",
        "smooth_yield_energy",
        "units",
        "cost",
        "yield",
        "smooth_cost",
        "smooth_yield",
    ]);
    for beta in betas(cli)? {
        let values = [
            work_cost(&s, beta),
            work_yield(&s, beta),
            smooth_work_cost(&s, beta, eps),
            smooth_work_yield(&s, beta, eps),
        ];
        let mut row: Vec<Cell> = vec![beta.value().into(), eps.value().into()];
        row.extend(values.iter().map(|w| Cell::Num(w.in_energy(beta))));
        row.push(units.label().into());
        row.extend(values.iter().map(|w| Cell::Num(units.from_nats(w.in_thermal_units(beta)))));
        table.push(row);
    }
    emit_table(cli, &table)
}

fn transform(cli: &Cli, p: &Path, q: &Path, catalyst: Option<&Path>, curve_out: Option<&Path>) -> CliResult<()> {
    let beta = single_beta(cli, "transform")?;
    let p = load_quasi(p)?;
    let q = load_quasi(q)?;
    let feasible = thermo_majorization_check(&p, &q, beta)?;
    let grid: Vec<Alpha<f64>> = WITNESS_ALPHAS.iter().map(|&a| Alpha::new(a)).collect::<Result<_, _>>()?;
    let second = second_laws_check(&p, &q, beta, &grid)?;
    let catalytic = match catalyst {
        Some(path) => {
            let c = Catalyst::new(load_quasi(path)?);
            Some(catalytic_transform_check_capped(&p, &q, &c, beta, dim_cap()?)?)
        }
        None => None,
    };

    let mut curves = Table::new(["state", "x", "y"]);
    for (label, s) in [("p", &p), ("q", &q)] {
        for &(x, y) in lorenz_curve(s, beta).vertices() {
            curves.push(vec![label.into(), x.into(), y.into()]);
        }
    }
    if let Some(path) = curve_out {
        write_csv_to(path, &curves)?;
    }

    let witness = second.witness;
    let mut table = Table::new([
        "beta",
        "feasible",
        "second_laws_pass",
        "witness_alpha",
        "witness_input",
        "witness_output",
        "catalytic_feasible",
    ]);
    table.push(vec![
        beta.value().into(),
        feasible.into(),
        second.feasible.into(),
        witness.map_or(Cell::Missing, |w| Cell::Text(w.alpha.to_string())),
        witness.map(|w| w.input).into(),
        witness.map(|w| w.output).into(),
        catalytic.map_or(Cell::Missing, Cell::Bool),
    ]);
    let mut json = table.to_json_value()[0].clone();
    json["curves"] = curves.to_json_value();
    emit(cli, json, &table)
}

fn embezzle(cli: &Cli, ns: &[usize]) -> CliResult<()> {
    let eps = eps(cli)?.value();
    let mut table = Table::new(["N", "degradation", "work_nats", "close_tr", "close_catD"]);
    for &n in ns {
        let report = embezzle_bit(&embezzler::<f64>(n)?)?;
        table.push(vec![
            n.into(),
            report.degradation.into(),
            report.work_embezzled.into(),
            (report.degradation <= eps).into(),
            (report.degradation <= catd_threshold(eps, n)?).into(),
        ]);
    }
    emit_table(cli, &table)
}

fn distribution_table(d: &WorkDistribution<f64>) -> Table {
    let mut t = Table::new(["W", "prob"]);
    for &(w, p) in d.support() {
        t.push(vec![w.into(), p.into()]);
    }
    t
}

fn fluctuation(cli: &Cli, path: &Path, mode: Mode, samples: usize, rev_out: Option<&Path>) -> CliResult<()> {
    let beta = single_beta(cli, "fluctuation")?;
    let text = read(path)?;
    let protocol = parse_protocol(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let df = delta_f(protocol.initial_energies(), protocol.final_energies(), beta);
    let expected = (-beta.value() * df).exp();
    match mode {
        Mode::Exact => {
            let fwd = enumerate_forward(&protocol, beta)?;
            let rev = enumerate_reverse(&protocol, beta)?;
            let crooks = crooks_check(&fwd, &rev, beta, df);
            let jarzynski = fwd.exp_average(beta);
            let fwd_table = distribution_table(&fwd);
            let rev_table = distribution_table(&rev);
            if let Some(p) = rev_out {
                write_csv_to(p, &rev_table)?;
            }
            let json = json!({
                "beta": beta.value(),
                "delta_f": df,
                "mean_work": fwd.mean(),
                "crooks_max_deviation": crooks.max_deviation,
                "absolute_continuity_failures": crooks.absolute_continuity_failures,
                "jarzynski": jarzynski,
                "expected": expected,
                "forward": fwd_table.to_json_value(),
                "reverse": rev_table.to_json_value(),
            });
            if cli.format == Format::Csv {
                eprintln!(
                    "delta_f={df} crooks_max_deviation={} jarzynski={jarzynski} expected={expected}",
                    crooks.max_deviation
                );
            }
            emit(cli, json, &fwd_table)
        }
        Mode::Mc => {
            let (estimate, stderr) = jarzynski_estimate(&protocol, beta, samples, cli.seed)?;
            let mut table = Table::new(["beta", "delta_f", "samples", "seed", "estimate", "stderr", "expected"]);
            table.push(vec![
                beta.value().into(),
                df.into(),
                samples.into(),
                cli.seed.into(),
                estimate.into(),
                stderr.into(),
                expected.into(),
            ]);
            emit(cli, table.to_json_value()[0].clone(), &table)
        }
    }
}
