use wavepack::constants::Constants;
use wavepack::continuum::{self, PotentialModel1D, Window};
use wavepack::interactions::{self, CrossSection, ThermalConvention, ThomsonVariant};
use wavepack::propagation::spread_state;
use wavepack::scenarios::{self, Row, CSV_HEADER};
use wavepack::units::{self, fmt_sig, parse_as, parse_as_or_bare, parse_vector, Dimension};
use wavepack::{packets, Dispersion, Error, Vec3, WavePacket};

use crate::output::Table;
use crate::{
    Cli, Command, ConventionArg, DispersionArg, MfpArgs, NonorthoArgs, OverlapArgs, PotentialArg, ProcessArg,
    ScenarioAction, SpreadArgs, TestFnArg, VerifyDeltaArgs, WindowArg, XsecArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit status 2.
    Usage(String),
    /// A computation failed: exit status 1.
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub table: Table,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    /// Failed checks; any entry gives exit status 1.
    pub failures: Vec<String>,
    pub hint: Option<String>,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Outcome {
            table,
            notes: Vec::new(),
            failures: Vec::new(),
            hint: None,
        }
    }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let c = Constants::from_env()?;
    let natural = cli.global.natural;
    match &cli.command {
        Command::Overlap(a) => overlap(a),
        Command::Spread(a) => spread(a, natural),
        Command::Xsec(a) => xsec(&c, a, natural),
        Command::Mfp(a) => mfp(&c, a, natural),
        Command::VerifyDelta(a) => verify_delta(a),
        Command::Nonortho(a) => nonortho(a),
        Command::Scenario {
            action: ScenarioAction::Run { file },
        } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            Ok(rows_outcome(scenarios::run_scenario(&c, &text)?))
        }
        Command::Ledger => Ok(rows_outcome(scenarios::ledger(&c)?)),
    }
}

fn rows_outcome(rows: Vec<Row>) -> Outcome {
    let mut out = Outcome::new(Table::new(CSV_HEADER.split(',')));
    for row in &rows {
        out.table.push(row.cells());
        let Some(check) = &row.check else { continue };
        if !row.acceptable() {
            out.failures.push(format!(
                "{} {}: ratio {}, tolerance {}",
                row.scenario,
                check.anchor.id,
                fmt_sig(check.ratio),
                check.anchor.tolerance
            ));
        } else if check.anchor.tolerance.is_flagged() {
            out.notes.push(format!(
                "{} {}: flagged inconsistent reference, ratio {}",
                row.scenario,
                check.anchor.id,
                fmt_sig(check.ratio)
            ));
        }
    }
    out
}

fn dispersion(arg: Option<DispersionArg>, mass: f64) -> Dispersion {
    match arg {
        Some(DispersionArg::Relativistic) => Dispersion::Relativistic,
        Some(DispersionArg::Nonrelativistic) => Dispersion::NonRelativistic,
        Some(DispersionArg::Massless) => Dispersion::Massless,
        None if mass == 0.0 => Dispersion::Massless,
        None => Dispersion::Relativistic,
    }
}

fn area(token: &str) -> Res<f64> {
    Ok(parse_as_or_bare(token, Dimension::Area, "m2")?)
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Res<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required here")))
}

struct PacketInput<'a> {
    p: &'a str,
    x: &'a str,
    t: &'a str,
    sigma: &'a str,
    m: &'a str,
}

fn packet(input: &PacketInput, disp: Option<DispersionArg>) -> Res<WavePacket> {
    let p = parse_vector(input.p, Dimension::Energy)?.map(units::ev_to_mev);
    let x = parse_vector(input.x, Dimension::Length)?.map(units::m_to_fm);
    let t0 = units::s_to_fm(parse_as(input.t, Dimension::Time)?);
    let sigma = units::m2_to_fm2(area(input.sigma)?);
    let mass = units::ev_to_mev(parse_as(input.m, Dimension::Energy)?);
    Ok(WavePacket::new(Vec3(p), Vec3(x), t0, sigma, mass, dispersion(disp, mass))?)
}

fn overlap(a: &OverlapArgs) -> Res<Outcome> {
    let one = PacketInput {
        p: &a.p1,
        x: &a.x1,
        t: &a.t1,
        sigma: &a.sigma1,
        m: &a.m1,
    };
    let two = PacketInput {
        p: a.p2.as_deref().unwrap_or(one.p),
        x: a.x2.as_deref().unwrap_or(one.x),
        t: a.t2.as_deref().unwrap_or(one.t),
        sigma: a.sigma2.as_deref().unwrap_or(one.sigma),
        m: a.m2.as_deref().unwrap_or(one.m),
    };
    let p1 = packet(&one, a.dispersion)?;
    let p2 = packet(&two, a.dispersion.or(Some(match p1.dispersion() {
        Dispersion::Relativistic => DispersionArg::Relativistic,
        Dispersion::NonRelativistic => DispersionArg::Nonrelativistic,
        Dispersion::Massless => DispersionArg::Massless,
    })))?;
    let t = units::s_to_fm(parse_as(&a.t, Dimension::Time)?);
    let r = packets::overlap(&p1, &p2, t)?;
    let mut out = Outcome::new(Table::new(["amplitude_re", "amplitude_im", "probability", "bound", "phase_rad"]));
    out.table.push([
        fmt_sig(r.amplitude.re),
        fmt_sig(r.amplitude.im),
        fmt_sig(r.probability),
        fmt_sig(r.bound),
        fmt_sig(r.phase),
    ]);
    for (i, p) in [p1, p2].iter().enumerate() {
        if !p.in_near_field(t) {
            out.notes.push(format!(
                "packet {} is outside its near field at t; the rigid closed form is approximate",
                i + 1
            ));
        }
    }
    Ok(out)
}

/// `points` times ending at `t`, log-spaced over `decades`.
fn sweep(t: f64, decades: u32, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![t];
    }
    (0..points)
        .map(|i| {
            let back = decades as f64 * (points - 1 - i) as f64 / (points - 1) as f64;
            t * 10f64.powf(-back)
        })
        .collect()
}

fn spread(a: &SpreadArgs, natural: bool) -> Res<Outcome> {
    let mass = units::ev_to_mev(parse_as(&a.mass, Dimension::Energy)?);
    let sigma = units::m2_to_fm2(area(&a.sigma)?);
    let p = units::ev_to_mev(parse_as(&a.p, Dimension::Energy)?);
    let t_end = parse_as(&a.t, Dimension::Time)?;
    if !(t_end > 0.0) {
        return Err(CliError::Usage("--t must be positive".into()));
    }
    let packet = WavePacket::new(
        Vec3::new(0.0, 0.0, p),
        Vec3::ZERO,
        0.0,
        sigma,
        mass,
        dispersion(a.dispersion, mass),
    )?;
    let header = if natural {
        ["t_fm", "w_L_fm", "w_T_fm", "center_fm"]
    } else {
        ["t_s", "w_L_m", "w_T_m", "center_m"]
    };
    let mut out = Outcome::new(Table::new(header));
    let len = |x: f64| if natural { x } else { units::fm_to_m(x) };
    for ts in sweep(t_end, a.decades, a.points) {
        let t = units::s_to_fm(ts);
        let s = spread_state(&packet, t)?;
        out.table.push([
            fmt_sig(if natural { t } else { ts }),
            fmt_sig(len(s.longitudinal_width)),
            fmt_sig(len(s.transverse_width)),
            fmt_sig(len(s.center.0[2])),
        ]);
    }
    out.hint = Some(
        "set datafile separator ','; set logscale xy; plot 'spread.csv' every ::1 using 1:2 with lines title 'w_L', \
         '' every ::1 using 1:3 with lines title 'w_T'"
            .into(),
    );
    Ok(out)
}

fn xsec(c: &Constants, a: &XsecArgs, natural: bool) -> Res<Outcome> {
    let energy = || -> Res<f64> { Ok(parse_as(required(&a.energy, "energy")?, Dimension::Energy)?) };
    let (name, sigma, differential): (&str, CrossSection, bool) = match a.process {
        ProcessArg::Rutherford => (
            "rutherford",
            interactions::rutherford(c, energy()?, a.log_lambda, a.charge)?,
            false,
        ),
        ProcessArg::RutherfordThermal => {
            let t = parse_as(required(&a.temperature, "temperature")?, Dimension::Temperature)?;
            let conv = match a.convention {
                ConventionArg::ThreeKt => ThermalConvention::ThreeKT,
                ConventionArg::Kt => ThermalConvention::KT,
            };
            ("rutherford_thermal", interactions::rutherford_thermal(c, t, a.log_lambda, conv)?, false)
        }
        ProcessArg::Thomson => {
            let v = if a.half { ThomsonVariant::Half } else { ThomsonVariant::Standard };
            ("thomson", interactions::thomson(c, v), false)
        }
        ProcessArg::Rayleigh => {
            let pol = parse_as(required(&a.polarizability, "polarizability")?, Dimension::Volume)?;
            let wl = parse_as(required(&a.wavelength, "wavelength")?, Dimension::Length)?;
            ("rayleigh", interactions::rayleigh(pol, wl)?, false)
        }
        ProcessArg::Compton => {
            let k0 = energy()?;
            match &a.angle {
                Some(angle) => {
                    let theta = parse_as(angle, Dimension::Angle)?;
                    let mut s = interactions::compton_total(c, k0)?;
                    s.value = interactions::compton_differential(c, k0, theta)?;
                    ("compton_differential", s, true)
                }
                None => ("compton", interactions::compton_total(c, k0)?, false),
            }
        }
        ProcessArg::Photoelectric => {
            let z = a.z.ok_or_else(|| CliError::Usage("--z is required here".into()))?;
            let k = match (a.k, &a.energy) {
                (Some(k), None) => k,
                (None, Some(_)) => energy()? / units::mev_to_ev(c.m_e),
                _ => return Err(CliError::Usage("give exactly one of --k and --energy".into())),
            };
            ("photoelectric", interactions::photoelectric(c, z, k)?, false)
        }
        ProcessArg::Strong => ("strong", interactions::strong_geometric(c), false),
    };
    let unit = if natural { "fm2" } else { "m2" };
    let column = if differential {
        format!("dsigma_domega_{unit}_per_sr")
    } else {
        format!("sigma_{unit}")
    };
    let value = if natural { units::m2_to_fm2(sigma.value) } else { sigma.value };
    let mut out = Outcome::new(Table::new(["process".to_string(), column]));
    out.table.push([name.to_string(), fmt_sig(value)]);
    out.notes.push(format!("validity: {}", sigma.validity_note));
    Ok(out)
}

fn mfp(c: &Constants, a: &MfpArgs, natural: bool) -> Res<Outcome> {
    let length = match (&a.sigma, &a.density, &a.energy, &a.dedx) {
        (Some(s), Some(n), None, None) => {
            interactions::mean_free_path_raw(area(s)?, parse_as(n, Dimension::NumberDensity)?)?
        }
        (None, None, Some(e), Some(d)) => interactions::energy_loss_length(
            parse_as(e, Dimension::Energy)?,
            parse_as(d, Dimension::EnergyPerLength)?,
        )?,
        _ => {
            return Err(CliError::Usage(
                "give either --sigma with --density, or --energy with --dedx".into(),
            ))
        }
    };
    let size = interactions::packet_size_from_mfp(c, length)?;
    let mut out = if natural {
        let mut o = Outcome::new(Table::new(["mean_free_path_fm", "sigma_fm2", "momentum_width_MeV"]));
        o.table.push([
            fmt_sig(units::m_to_fm(size.width)),
            fmt_sig(units::m2_to_fm2(size.sigma)),
            fmt_sig(units::ev_to_mev(size.momentum_width)),
        ]);
        o
    } else {
        let mut o = Outcome::new(Table::new(["mean_free_path_m", "sigma_m2", "momentum_width_eV"]));
        o.table.push([fmt_sig(size.width), fmt_sig(size.sigma), fmt_sig(size.momentum_width)]);
        o
    };
    out.notes.push("packet width set equal to the mean free path".into());
    Ok(out)
}

fn verify_delta(a: &VerifyDeltaArgs) -> Res<Outcome> {
    if !(a.width > 0.0 && a.from > 0.0 && a.to >= a.from && a.points >= 1) {
        return Err(CliError::Usage("need --width > 0, 0 < --from <= --to and --points >= 1".into()));
    }
    let window = match a.window {
        WindowArg::OneSided => Window::OneSided,
        WindowArg::Symmetric => Window::Symmetric,
        WindowArg::Offset => Window::Offset(a.offset),
    };
    let (k1, w) = (a.k1, a.width);
    let f = move |k: f64| match a.test_fn {
        TestFnArg::Gaussian => (-0.5 * ((k - k1) / w).powi(2)).exp(),
        TestFnArg::Cusp => (-((k - k1) / w).abs()).exp(),
    };
    let range = (k1 - 40.0 * w, k1 + 40.0 * w);
    let expected = window.delta_weight() * f(k1);
    let mut out = Outcome::new(Table::new([
        "lambda",
        "lambda_width",
        "integral_re",
        "integral_im",
        "expected",
        "residual",
    ]));
    let steps = a.points.max(2) - 1;
    let ratio = (a.to / a.from).ln();
    let mut last = f64::NAN;
    for i in 0..a.points {
        let lw = if a.points == 1 {
            a.to
        } else {
            a.from * (ratio * i as f64 / steps as f64).exp()
        };
        let lambda = lw / w;
        let v = continuum::scaled_delta_integral(k1, lambda, f, window, range)?;
        last = (v - expected).norm() / expected;
        out.table.push([
            fmt_sig(lambda),
            fmt_sig(lw),
            fmt_sig(v.re),
            fmt_sig(v.im),
            fmt_sig(expected),
            fmt_sig(last),
        ]);
    }
    if !(last <= a.tolerance) {
        out.failures.push(format!(
            "residual {} at the largest window exceeds {}",
            fmt_sig(last),
            a.tolerance
        ));
    }
    out.hint = Some(
        "set datafile separator ','; set logscale xy; plot 'delta.csv' every ::1 using 2:6 with linespoints title 'residual'"
            .into(),
    );
    Ok(out)
}

fn nonortho(a: &NonorthoArgs) -> Res<Outcome> {
    let model = match a.potential {
        PotentialArg::Delta => PotentialModel1D::delta(a.g, a.mass)?,
        PotentialArg::Barrier => PotentialModel1D::square_barrier(a.height, a.half_width, a.mass)?,
    };
    if !(a.k_min > 0.0 && a.k_max > a.k_min && a.grid >= 2) {
        return Err(CliError::Usage("need 0 < --k-min < --k-max and --grid >= 2".into()));
    }
    let ks: Vec<f64> = (0..a.grid)
        .map(|i| a.k_min + (a.k_max - a.k_min) * i as f64 / (a.grid - 1) as f64)
        .collect();
    let mut header = vec!["k1", "k2", "delta_re", "delta_im"];
    if a.check {
        header.extend(["windowed_re", "windowed_im", "residual"]);
    }
    let mut out = Outcome::new(Table::new(header));
    for (i, &k1) in ks.iter().enumerate() {
        for &k2 in &ks[i + 1..] {
            let d = continuum::overlap_decomposition(&model, k1, k2)?.delta_term;
            let mut row = vec![fmt_sig(k1), fmt_sig(k2), fmt_sig(d.re), fmt_sig(d.im)];
            if a.check {
                let wv = continuum::windowed_overlap(&model, k1, k2, a.lambda)?;
                let residual = (wv + d).norm() / d.norm();
                row.extend([fmt_sig(wv.re), fmt_sig(wv.im), fmt_sig(residual)]);
                if !(residual <= a.tolerance) {
                    out.failures.push(format!(
                        "k1 = {}, k2 = {}: windowed overlap differs from -Delta by {}",
                        fmt_sig(k1),
                        fmt_sig(k2),
                        fmt_sig(residual)
                    ));
                }
            }
            out.table.push(row);
        }
    }
    Ok(out)
}
