use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use super::analyze::{AnalysisOutput, CompareRow};
use super::config::AnalysisConfig;
use super::sweep::{summarize, SweepRow};
use super::tables::TableCell;
use crate::spectral::NoisePsd;

/// Scientific notation with `digits` significant digits and a signed
/// two-digit exponent, e.g. `6.6522e-03`.
pub fn sci(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    )
}

/// 16 significant digits.
pub fn num(x: f64) -> String {
    sci(x, 16)
}

/// 5 significant digits.
pub fn short(x: f64) -> String {
    sci(x, 5)
}

fn cshort(z: C64) -> String {
    format!(
        "{} {} {}i",
        short(z.re),
        if z.im < 0.0 { '-' } else { '+' },
        short(z.im.abs())
    )
}

pub const CONFIG_PREFIX: &str = "# config: ";

/// Extracts the echoed config from a CSV produced by this program.
pub fn config_from_csv(text: &str) -> Option<AnalysisConfig> {
    let line = text.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX))?;
    serde_json::from_str(line).ok()
}

fn header(cfg: &AnalysisConfig, columns: &str) -> String {
    format!("{CONFIG_PREFIX}{}\n{columns}\n", cfg.to_json())
}

pub fn analysis_csv(out: &AnalysisOutput) -> String {
    let mut s = header(
        &out.config,
        "method,p,q,re_sigma_p,im_sigma_p,re_sigma_q,im_sigma_q,re_lambda0,im_lambda0,re_lambda2,im_lambda2,epsilon_crit,epsilon,re_lambda,im_lambda,stable",
    );
    for r in &out.reports {
        let (eps, lre, lim) = match (r.epsilon, r.lambda) {
            (Some(e), Some(l)) => (num(e), num(l.re), num(l.im)),
            _ => (String::new(), String::new(), String::new()),
        };
        let cells = [
            r.method.to_string(),
            r.pair.p.to_string(),
            r.pair.q.to_string(),
            num(r.pair.sigma_p.re),
            num(r.pair.sigma_p.im),
            num(r.pair.sigma_q.re),
            num(r.pair.sigma_q.im),
            num(r.pair.lambda0.re),
            num(r.pair.lambda0.im),
            num(r.lambda2.re),
            num(r.lambda2.im),
            num(r.epsilon_crit),
            eps,
            lre,
            lim,
            r.is_stable().to_string(),
        ];
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn analysis_text(out: &AnalysisOutput) -> String {
    let mut s = String::new();
    for r in &out.reports {
        let _ = writeln!(s, "method       {}", r.method);
        let _ = writeln!(s, "mode pair    ({}, {})", r.pair.p, r.pair.q);
        let _ = writeln!(s, "sigma_p      {}", cshort(r.pair.sigma_p));
        let _ = writeln!(s, "sigma_q      {}", cshort(r.pair.sigma_q));
        let _ = writeln!(s, "lambda0      {}", cshort(r.pair.lambda0));
        let _ = writeln!(s, "lambda2      {}", cshort(r.lambda2));
        let _ = writeln!(s, "epsilon_crit {}", short(r.epsilon_crit));
        if let (Some(e), Some(l)) = (r.epsilon, r.lambda) {
            let _ = writeln!(s, "epsilon      {}", short(e));
            let _ = writeln!(s, "lambda       {}", cshort(l));
        }
        let _ = writeln!(
            s,
            "verdict      {}",
            if r.is_stable() { "stable" } else { "unstable" }
        );
        for d in &r.diagnostics {
            let _ = writeln!(s, "note         {d}");
        }
        s.push('\n');
    }
    if let Some(d) = out.lambda2_relative_difference {
        let _ = writeln!(
            s,
            "lambda2 relative difference between methods: {}",
            short(d)
        );
    }
    s
}

pub fn sweep_csv(cfg: &AnalysisConfig, rows: &[SweepRow]) -> String {
    let mut s = header(
        cfg,
        "alpha,re_sigma_p,re_lambda0,im_lambda0,re_lambda2,epsilon_crit,error",
    );
    for r in rows {
        match &r.report {
            Some(rep) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},",
                    num(r.alpha),
                    num(rep.pair.sigma_p.re),
                    num(rep.pair.lambda0.re),
                    num(rep.pair.lambda0.im),
                    num(rep.lambda2.re),
                    num(rep.epsilon_crit)
                );
            }
            None => {
                let msg = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
                let _ = writeln!(s, "{},,,,,,{msg}", num(r.alpha));
            }
        }
    }
    match summarize(rows) {
        Some(m) => {
            let _ = writeln!(
                s,
                "# minimum: alpha={}, epsilon_crit={}",
                num(m.alpha),
                num(m.epsilon_crit)
            );
        }
        None => s.push_str("# minimum: none\n"),
    }
    s
}

pub fn sweep_text(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:>11} {:>11} {:>11} {:>11} {:>11}\n",
        "alpha", "Re sigma_p", "Re lambda0", "Re lambda2", "eps_crit"
    );
    for r in rows {
        match &r.report {
            Some(rep) => {
                let _ = writeln!(
                    s,
                    "{:>11} {:>11} {:>11} {:>11} {:>11}",
                    short(r.alpha),
                    short(rep.pair.sigma_p.re),
                    short(rep.pair.lambda0.re),
                    short(rep.lambda2.re),
                    short(rep.epsilon_crit)
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "{:>11} error: {}",
                    short(r.alpha),
                    r.error.as_deref().unwrap_or("")
                );
            }
        }
    }
    match summarize(rows) {
        Some(m) => {
            let _ = writeln!(
                s,
                "minimum epsilon_crit {} at alpha {}",
                short(m.epsilon_crit),
                short(m.alpha)
            );
        }
        None => s.push_str("no successful grid point\n"),
    }
    s
}

pub fn table1_csv(cfg: &AnalysisConfig, cells: &[TableCell]) -> String {
    let mut s = header(cfg, "depth,n,relative_error,reference,pass");
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(c.depth),
            c.n.unwrap_or(0),
            num(c.value),
            num(c.reference),
            c.pass
        );
    }
    s
}

pub fn table2_csv(cfg: &AnalysisConfig, cells: &[TableCell]) -> String {
    let mut s = header(cfg, "depth,relative_difference,reference,pass");
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            num(c.depth),
            num(c.value),
            num(c.reference),
            c.pass
        );
    }
    s
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn table_text(cells: &[TableCell]) -> String {
    let mut s = format!(
        "{:>6} {:>6} {:>11} {:>11}  result\n",
        "L", "N", "ours", "reference"
    );
    for c in cells {
        let n = c.n.map_or("-".to_string(), |n| n.to_string());
        let _ = writeln!(
            s,
            "{:>6} {:>6} {:>11} {:>11}  {}",
            c.depth,
            n,
            short(c.value),
            short(c.reference),
            mark(c.pass)
        );
    }
    let failed = cells.iter().filter(|c| !c.pass).count();
    let _ = writeln!(
        s,
        "{} of {} entries pass",
        cells.len() - failed,
        cells.len()
    );
    s
}

pub fn compare_csv(cfg: &AnalysisConfig, rows: &[CompareRow]) -> String {
    let mut s = header(cfg, "mode,re_sigma,im_sigma,re_ip_eigensum,im_ip_eigensum,re_ip_residues,im_ip_residues,relative_difference");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.mode,
            num(r.sigma.re),
            num(r.sigma.im),
            num(r.ip_eigensum.re),
            num(r.ip_eigensum.im),
            num(r.ip_residues.re),
            num(r.ip_residues.im),
            num(r.relative_difference)
        );
    }
    s
}

pub fn compare_text(rows: &[CompareRow]) -> String {
    let mut s = format!(
        "{:>4} {:>26} {:>26} {:>26} {:>11}\n",
        "mode", "sigma", "I_p eigen-sum", "I_p residues", "rel. diff"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>4} {:>26} {:>26} {:>26} {:>11}",
            r.mode,
            cshort(r.sigma),
            cshort(r.ip_eigensum),
            cshort(r.ip_residues),
            short(r.relative_difference)
        );
    }
    s
}

/// Tabulated spectrum data for the `psd` command.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PsdReport {
    pub a: f64,
    pub omega0: f64,
    pub poles: Vec<C64>,
    pub residues: Vec<C64>,
    pub residue_sum: C64,
    pub normalization: f64,
    pub spectrum: Vec<(f64, f64)>,
    /// `(z, closed form, quadrature)`; quadrature is absent for `Re z ≤ 0`.
    pub extended: Vec<(C64, C64, Option<C64>)>,
}

pub fn psd_report(
    psd: &NoisePsd,
    omegas: &[f64],
    zs: &[C64],
) -> Result<PsdReport, super::CliError> {
    let set = psd.poles_residues();
    let extended = zs
        .iter()
        .map(|&z| {
            Ok((
                z,
                psd.gz_closed(z)?,
                if z.re > 0.0 {
                    Some(psd.gz_quadrature(z)?)
                } else {
                    None
                },
            ))
        })
        .collect::<Result<Vec<_>, crate::spectral::SpectralError>>()?;
    Ok(PsdReport {
        a: psd.a(),
        omega0: psd.omega0(),
        poles: set.poles().to_vec(),
        residues: set.residues().to_vec(),
        residue_sum: set.residue_sum(),
        normalization: psd.normalization()?,
        spectrum: omegas.iter().map(|&w| (w, psd.psd_eval(w))).collect(),
        extended,
    })
}

pub fn psd_text(r: &PsdReport) -> String {
    let mut s = format!(
        "a = {}, omega0 = {}\n\n{:>4} {:>26} {:>26}\n",
        r.a, r.omega0, "m", "pole", "residue"
    );
    for (m, (p, q)) in r.poles.iter().zip(&r.residues).enumerate() {
        let _ = writeln!(s, "{m:>4} {:>26} {:>26}", cshort(*p), cshort(*q));
    }
    let _ = writeln!(
        s,
        "\nsum of residues  {}  (1/2pi = {})",
        cshort(r.residue_sum),
        short(1.0 / std::f64::consts::TAU)
    );
    let _ = writeln!(s, "integral of S    {:.10}", r.normalization);
    if !r.spectrum.is_empty() {
        let _ = writeln!(s, "\n{:>11} {:>11}", "omega", "S(omega)");
        for (w, v) in &r.spectrum {
            let _ = writeln!(s, "{:>11} {:>11}", short(*w), short(*v));
        }
    }
    if !r.extended.is_empty() {
        let _ = writeln!(
            s,
            "\n{:>26} {:>26} {:>26}",
            "z", "G(z) closed form", "G(z) quadrature"
        );
        for (z, g, q) in &r.extended {
            let q = q.map_or("-".to_string(), cshort);
            let _ = writeln!(s, "{:>26} {:>26} {:>26}", cshort(*z), cshort(*g), q);
        }
    }
    s
}

pub fn psd_csv(psd: &super::config::PsdConfig, r: &PsdReport) -> String {
    let mut s = format!(
        "{CONFIG_PREFIX}{}\nkind,x_re,x_im,value_re,value_im\n",
        serde_json::to_string(psd).expect("psd config serializes")
    );
    for (p, q) in r.poles.iter().zip(&r.residues) {
        let _ = writeln!(
            s,
            "pole,{},{},{},{}",
            num(p.re),
            num(p.im),
            num(q.re),
            num(q.im)
        );
    }
    for (w, v) in &r.spectrum {
        let _ = writeln!(s, "psd,{},{},{},{}", num(*w), num(0.0), num(*v), num(0.0));
    }
    for (z, g, _) in &r.extended {
        let _ = writeln!(
            s,
            "extended,{},{},{},{}",
            num(z.re),
            num(z.im),
            num(g.re),
            num(g.im)
        );
    }
    s
}
