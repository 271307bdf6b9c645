//! One handler per subcommand; each returns an [`Outcome`] or a library error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use padic_core::asymptotics::{
    quasi_limit, verify_th10, verify_th5, verify_th7_th8, verify_th9, Automodel, Direction,
    IdentityReport,
};
use padic_core::distributions::catalog::character_from_index;
use padic_core::lizorkin::{is_phi, project, random_phi, LizorkinKind};
use padic_core::operators::{apply_report, solve, Symbol};
use padic_core::padic::is_prime;
use padic_core::schwartz::random;
use padic_core::schwartz::TestFunctionJson;
use padic_core::special::{format_rational, gamma_p_char, gamma_p_n, gamma_p_n_exact, GammaValue};
use padic_core::wavelets::{
    eigencheck, enumerate, gram, identity_deviation, kozyrev, WaveletIndex,
};
use padic_core::{
    parse_complex, selftest, CatalogEntry, Error, Grid, MultCharacter, PRational, PVector, Result,
    TestFunction,
};

use crate::output::{complex, real, sci, Outcome};
use crate::{
    BuildArgs, Command, Config, FnCommand, LizorkinCommand, OpArgs, OpCommand, TaubArgs,
    TaubCommand, WaveletArgs, WaveletCommand,
};

pub fn run(command: Command, config: &Config) -> Result<Outcome> {
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!(
            "--tol must be positive, got {}",
            config.tol
        )));
    }
    match command {
        Command::Function(cmd) => function(cmd, config),
        Command::Fourier {
            input,
            inverse,
            out,
        } => {
            let phi = load(&input, config)?;
            let hat = if inverse {
                phi.inverse_fourier()
            } else {
                phi.fourier()
            };
            emit_function(&hat, out.as_deref())
        }
        Command::Lizorkin(cmd) => lizorkin(cmd, config),
        Command::Gamma { p, alpha, n, pi1 } => gamma(p, &alpha, n, pi1, config),
        Command::Pair { dist, input } => {
            let phi = load(&input, config)?;
            let f = CatalogEntry::parse(&dist, phi.p(), phi.n())?.distribution();
            let value = f.pair(&phi)?;
            let human = format!("<{}, phi> = {}", f.name(), complex(value, config.precision));
            Ok(Outcome::new(
                human,
                json!({ "distribution": f.name(), "value": value }),
            ))
        }
        Command::Op(cmd) => operator(cmd, config),
        Command::Wavelet(cmd) => wavelet(cmd, config),
        Command::Taub(cmd) => tauberian(cmd, config),
        Command::Selftest { seed, criterion } => {
            let report = match criterion {
                Some(id) => {
                    let r = selftest::run_criterion(id, seed)?;
                    selftest::SelftestReport {
                        seed,
                        passed: r.passed,
                        criteria: vec![r],
                    }
                }
                None => selftest::run(seed),
            };
            let mut human: String = report.criteria.iter().map(|c| format!("{c}\n")).collect();
            let passed = report.criteria.iter().filter(|c| c.passed).count();
            let _ = write!(
                human,
                "{passed}/{} criteria passed (seed {seed})",
                report.criteria.len()
            );
            let ok = report.passed;
            Ok(Outcome::checked(human, report, ok))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn check_cells(p: u64, n: usize, l: i64, big_n: i64, config: &Config) -> Result<()> {
    if big_n >= l {
        let cells = Grid::cell_count(p, n, big_n - l);
        if cells > config.max_cells {
            return Err(Error::GridTooLarge {
                cells,
                limit: config.max_cells,
            });
        }
    }
    Ok(())
}

/// Reads a test function, enforcing `--max-cells` before allocating.
fn load(path: &Path, config: &Config) -> Result<TestFunction> {
    let json: TestFunctionJson = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    check_cells(json.p, json.n, json.l, json.big_n, config)?;
    TestFunction::from_json(&json)
}

fn grid_summary(grid: &Grid) -> String {
    format!(
        "p={} n={} (l,N)=({},{}) cells={}",
        grid.p,
        grid.n,
        grid.l,
        grid.big_n,
        grid.cells()
    )
}

/// Prints the function JSON, or writes it to `out` and prints a summary.
fn emit_function(f: &TestFunction, out: Option<&Path>) -> Result<Outcome> {
    match out {
        None => Ok(Outcome::new(f.to_json_string(), f.to_json())),
        Some(path) => {
            std::fs::write(path, f.to_json_string() + "\n")
                .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
            let human = format!("wrote {} ({})", path.display(), grid_summary(f.grid()));
            Ok(Outcome::new(
                human,
                json!({ "out": path, "grid": f.grid() }),
            ))
        }
    }
}

fn with_note(mut outcome: Outcome, note: String, out: Option<&Path>) -> Outcome {
    if out.is_some() {
        outcome.human = format!("{}\n{note}", outcome.human);
    } else {
        eprintln!("note: {note}");
    }
    outcome
}

fn parse_point(s: &str, p: u64) -> Result<PVector> {
    PVector::new(
        s.split(',')
            .map(|x| PRational::parse(x, p))
            .collect::<Result<_>>()?,
    )
}

fn parse_kind(s: &str) -> Result<LizorkinKind> {
    s.parse()
}

fn function(cmd: FnCommand, config: &Config) -> Result<Outcome> {
    match cmd {
        FnCommand::Build(args) => build(args, config),
        FnCommand::Info { input } => {
            let phi = load(&input, config)?;
            let prec = config.precision;
            let first = is_phi(&phi, LizorkinKind::FirstKind, config.tol).holds;
            let second = is_phi(&phi, LizorkinKind::SecondKind, config.tol).holds;
            let human = format!(
                "grid         {}\nintegral     {}\nvalue at 0   {}\nL2 norm      {}\nsup norm     {}\nLizorkin     first kind: {first}, second kind: {second}",
                grid_summary(phi.grid()),
                complex(phi.integrate(), prec),
                complex(phi.value_at_zero(), prec),
                real(phi.l2_norm(), prec),
                real(phi.sup_norm(), prec),
            );
            Ok(Outcome::new(
                human,
                json!({
                    "grid": phi.grid(),
                    "cells": phi.grid().cells(),
                    "integral": phi.integrate(),
                    "value_at_zero": phi.value_at_zero(),
                    "l2_norm": phi.l2_norm(),
                    "sup_norm": phi.sup_norm(),
                    "lizorkin_first_kind": first,
                    "lizorkin_second_kind": second,
                }),
            ))
        }
        FnCommand::Eval { input, x } => {
            let phi = load(&input, config)?;
            let point = parse_point(&x, phi.p())?;
            let value = phi.evaluate(&point)?;
            Ok(Outcome::new(
                format!("phi({point}) = {}", complex(value, config.precision)),
                json!({ "x": point.to_string(), "value": value }),
            ))
        }
    }
}

fn build(args: BuildArgs, config: &Config) -> Result<Outcome> {
    let BuildArgs {
        shape,
        p,
        n,
        k,
        center,
        l,
        big_n,
        seed,
        bound,
        kind,
        out,
    } = args;
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = match shape.as_str() {
        "omega" => TestFunction::omega(p, n)?,
        "ball" => TestFunction::indicator_ball(p, n, k)?,
        "delta" => TestFunction::delta_k(p, n, k)?,
        "coset" => {
            let center = center.ok_or_else(|| Error::Parse("'coset' needs --center".into()))?;
            let center = parse_point(&center, p)?;
            if center.n() != n {
                return Err(Error::DimensionMismatch(n, center.n()));
            }
            TestFunction::indicator_coset(&center, k)?
        }
        "random" => {
            check_cells(p, n, l, big_n, config)?;
            random::integer(Grid::new(p, n, l, big_n)?, bound, &mut rng)
        }
        "lizorkin" => {
            check_cells(p, n, l, big_n, config)?;
            random_phi(
                Grid::new(p, n, l, big_n)?,
                parse_kind(&kind)?,
                bound,
                &mut rng,
            )?
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown shape '{other}' (expected omega, ball, delta, coset, random or lizorkin)"
            )))
        }
    };
    check_cells(p, n, f.grid().l, f.grid().big_n, config)?;
    emit_function(&f, out.as_deref())
}

fn lizorkin(cmd: LizorkinCommand, config: &Config) -> Result<Outcome> {
    match cmd {
        LizorkinCommand::Check { input, kind } => {
            let phi = load(&input, config)?;
            let kind = parse_kind(&kind)?;
            let m = is_phi(&phi, kind, config.tol);
            let human = match &m.witness {
                None => format!("in the Lizorkin space of the {kind}"),
                Some(w) => {
                    let what = match w.axis {
                        Some(axis) => {
                            format!("the integral over x_{} at fiber {:?}", axis + 1, w.fiber)
                        }
                        None => "the total integral".to_string(),
                    };
                    format!(
                        "not in the Lizorkin space of the {kind}: {what} is {}",
                        complex(w.value, config.precision)
                    )
                }
            };
            let holds = m.holds;
            Ok(Outcome::checked(
                human,
                json!({ "kind": kind, "membership": m }),
                holds,
            ))
        }
        LizorkinCommand::Project {
            input,
            kind,
            t,
            out,
        } => {
            let phi = load(&input, config)?;
            let kind = parse_kind(&kind)?;
            let t = PRational::parse(&t, phi.p())?;
            let projection = project(&phi, kind, &t)?;
            let mut outcome = emit_function(&projection.function, out.as_deref())?;
            outcome.json = json!({ "distance": projection.distance, "result": outcome.json });
            let note = format!(
                "||phi_t - phi||_2 = {}",
                real(projection.distance, config.precision)
            );
            Ok(with_note(outcome, note, out.as_deref()))
        }
    }
}

#[derive(Serialize)]
struct GammaJson {
    p: u64,
    n: usize,
    alpha: Complex64,
    pi1: u64,
    exact: Option<String>,
    value: Option<Complex64>,
    pole: Option<i64>,
}

fn gamma(p: u64, alpha: &str, n: usize, pi1: u64, config: &Config) -> Result<Outcome> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Domain("the dimension n must be at least 1".into()));
    }
    let alpha = parse_complex(alpha)?;
    let value = if pi1 == 0 {
        gamma_p_n(p, n, alpha)
    } else {
        if n != 1 {
            return Err(Error::Domain(
                "a tame character is only supported for n = 1".into(),
            ));
        }
        gamma_p_char(&MultCharacter::new(alpha, character_from_index(p, pi1)?))
    };
    let integer = alpha.im == 0.0 && alpha.re.fract() == 0.0 && alpha.re.abs() < 1e6;
    let exact = (pi1 == 0 && integer)
        .then(|| gamma_p_n_exact(p, n, alpha.re as i64))
        .flatten()
        .map(|r| format_rational(&r));
    let (human, v, pole) = match value {
        GammaValue::Value(v) => {
            let shown = complex(v, config.precision);
            let human = match &exact {
                Some(e) => format!("{e} ≈ {shown}"),
                None => shown,
            };
            (human, Some(v), None)
        }
        GammaValue::Pole { j } => (format!("pole at alpha = 2*pi*i*{j}/ln {p}"), None, Some(j)),
    };
    Ok(Outcome::new(
        human,
        GammaJson {
            p,
            n,
            alpha,
            pi1,
            exact,
            value: v,
            pole,
        },
    ))
}

fn operator(cmd: OpCommand, config: &Config) -> Result<Outcome> {
    let (args, solving) = match cmd {
        OpCommand::Apply(a) => (a, false),
        OpCommand::Solve(a) => (a, true),
    };
    let OpArgs {
        symbol,
        input,
        kind,
        out,
    } = args;
    let phi = load(&input, config)?;
    let sym = Symbol::parse(&symbol, phi.p(), phi.n())?;
    let kind = match kind {
        Some(k) => parse_kind(&k)?,
        None if sym.needs_first_kind() => LizorkinKind::FirstKind,
        None => LizorkinKind::SecondKind,
    };
    if solving {
        let u = solve(&sym, &phi, kind)?;
        return emit_function(&u, out.as_deref());
    }
    let report = apply_report(&sym, &phi, kind)?;
    let outcome = emit_function(&report.output, out.as_deref())?;
    if report.symbol_zeros > 0 {
        let note = format!(
            "{sym} vanishes on {} spectral cells of the input",
            report.symbol_zeros
        );
        return Ok(with_note(outcome, note, out.as_deref()));
    }
    Ok(outcome)
}

fn wavelet_index(args: &WaveletArgs) -> Result<WaveletIndex> {
    WaveletIndex::new(args.gamma, args.j, PRational::parse(&args.a, args.p)?)
}

fn wavelet(cmd: WaveletCommand, config: &Config) -> Result<Outcome> {
    match cmd {
        WaveletCommand::Build { index, out } => {
            emit_function(&kozyrev(&wavelet_index(&index)?)?, out.as_deref())
        }
        WaveletCommand::Eigencheck { index, alpha } => {
            let idx = wavelet_index(&index)?;
            let alpha = parse_complex(&alpha)?;
            let r = eigencheck(&idx, alpha)?;
            let ok = r.residual <= config.tol;
            let human = format!(
                "{idx}: eigenvalue {}, residual {}",
                complex(r.eigenvalue, config.precision),
                sci(r.residual)
            );
            Ok(Outcome::checked(
                human,
                json!({ "index": idx.to_string(), "alpha": alpha, "report": r }),
                ok,
            ))
        }
        WaveletCommand::Gram {
            p,
            gamma_min,
            gamma_max,
            depth,
        } => {
            let family = enumerate(p, gamma_min..=gamma_max, depth)?;
            let deviation = identity_deviation(&gram(&family)?);
            let ok = deviation <= config.tol;
            let human = format!(
                "{} wavelets, max |G - I| = {}",
                family.len(),
                sci(deviation)
            );
            Ok(Outcome::checked(
                human,
                json!({ "count": family.len(), "deviation": deviation }),
                ok,
            ))
        }
    }
}

fn ks(args: &TaubArgs) -> Result<Vec<i64>> {
    if args.k_min > args.k_max {
        return Err(Error::Domain(format!(
            "empty scale range {}..={}",
            args.k_min, args.k_max
        )));
    }
    Ok((args.k_min..=args.k_max).collect())
}

fn identity_outcome(title: String, report: IdentityReport, config: &Config) -> Outcome {
    let prec = config.precision;
    let mut human = format!("{title}\n k  lhs  rhs  residual\n");
    for row in &report.rows {
        let _ = writeln!(
            human,
            "{:>2}  {}  {}  {}",
            row.k,
            complex(row.lhs, prec),
            complex(row.rhs, prec),
            sci(row.residual)
        );
    }
    let _ = write!(human, "max residual {}", sci(report.max_residual));
    let ok = report.max_residual <= config.tol;
    Outcome::checked(human, json!({ "identity": title, "report": report }), ok)
}

fn tauberian(cmd: TaubCommand, config: &Config) -> Result<Outcome> {
    let prec = config.precision;
    let setup = |args: &TaubArgs, input: &PathBuf| -> Result<_> {
        let phi = load(input, config)?;
        let f = CatalogEntry::parse(&args.dist, phi.p(), phi.n())?.distribution();
        let rho = Automodel::parse(&args.rho, phi.p())?;
        Ok((phi, f, rho))
    };
    let kind = match cmd {
        TaubCommand::Th7 { .. } => LizorkinKind::FirstKind,
        _ => LizorkinKind::SecondKind,
    };
    match cmd {
        TaubCommand::QuasiLimit {
            args,
            input,
            direction,
        } => {
            let (phi, f, rho) = setup(&args, &input)?;
            let direction: Direction = direction.parse()?;
            let report = quasi_limit(&f, &rho, &phi, direction, args.k_max, config.tol)?;
            let mut human = format!(
                "s_k = <{}(t_k x), phi>/rho(t_k), t_k -> {direction}\n",
                f.name()
            );
            for row in &report.rows {
                let _ = writeln!(human, "{:>2}  {}", row.k, complex(row.value, prec));
            }
            let verdict = if report.stabilized {
                "stabilized"
            } else {
                "not stabilized"
            };
            let _ = write!(human, "limit ≈ {} ({verdict})", complex(report.limit, prec));
            let ok = report.stabilized;
            Ok(Outcome::checked(human, report, ok))
        }
        TaubCommand::Th5 { args, input } => {
            let (phi, f, rho) = setup(&args, &input)?;
            let report = verify_th5(&f, &rho, &phi, &ks(&args)?)?;
            Ok(identity_outcome(
                format!("Fourier identity for {}", f.name()),
                report,
                config,
            ))
        }
        TaubCommand::Th7 { args, input, beta } | TaubCommand::Th8 { args, input, beta } => {
            let (phi, f, rho) = setup(&args, &input)?;
            let beta: Vec<Complex64> = beta.split(',').map(parse_complex).collect::<Result<_>>()?;
            let report = verify_th7_th8(&f, &beta, &rho, &phi, kind, &ks(&args)?)?;
            Ok(identity_outcome(
                format!("D^beta identity ({kind}) for {}", f.name()),
                report,
                config,
            ))
        }
        TaubCommand::Th9 { args, p, c, big_n } => {
            let f = CatalogEntry::parse(&args.dist, p, 1)?.distribution();
            let rho = Automodel::parse(&args.rho, p)?;
            let c = parse_complex(&c)?;
            let report = verify_th9(&f, &rho, c, big_n, &ks(&args)?)?;
            let mut human = format!("(D^-{big_n} f)(y) - (D^-{big_n} f)(py) over |y|^N rho(y) - |py|^N rho(py), |y| = p^k\n");
            for row in &report.rows {
                let _ = writeln!(human, "{:>2}  {}", row.k, complex(row.ratio, prec));
            }
            let _ = match report.predicted {
                Some(v) => write!(human, "predicted {}", complex(v, prec)),
                None => write!(human, "no prediction: a Gamma value is a pole"),
            };
            if let Some(e) = report.final_error {
                let _ = write!(human, ", final error {}", sci(e));
            }
            let ok = report.final_error.is_some_and(|e| e <= config.tol);
            Ok(Outcome::checked(human, report, ok))
        }
        TaubCommand::Th10 {
            args,
            input,
            symbol,
            degree,
            degree_pi1,
        } => {
            let (phi, f, rho) = setup(&args, &input)?;
            let sym = Symbol::parse(&symbol, phi.p(), phi.n())?;
            let beta = parse_complex(&degree)?;
            let degree = MultCharacter::new(beta + 1.0, character_from_index(phi.p(), degree_pi1)?);
            let report = verify_th10(&f, &sym, &degree, &rho, &phi, &ks(&args)?)?;
            Ok(identity_outcome(
                format!("{sym} identity for {}", f.name()),
                report,
                config,
            ))
        }
    }
}
