//! Receiver-noise-limited resolution, photodetector sensitivity and the
//! laser power budget that bounds the VDPE size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Bracket searched for the photodetector sensitivity, in dBm.
pub const SENSITIVITY_BRACKET_DBM: (f64, f64) = (-60.0, 0.0);
/// Tolerance on the achieved resolution at the solved sensitivity.
pub const RESOLUTION_TOLERANCE: f64 = 1e-6;
/// Upper limit for the VDPE size search when losses do not grow with `N`.
pub const MAX_SEARCH_N: u32 = 1 << 24;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Physical link parameters. Missing JSON fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpticalLinkParams {
    pub p_laser_dbm: f64,
    /// Photodetector responsivity, A/W.
    pub r_pd: f64,
    /// Load resistance, ohm.
    pub r_l: f64,
    /// Dark current, A.
    pub i_d: f64,
    /// Temperature, K.
    pub t: f64,
    pub rin_db_per_hz: f64,
    pub eta_wpe: f64,
    pub il_smf_db: f64,
    pub il_ec_db: f64,
    pub il_wg_db_per_mm: f64,
    pub el_splitter_db: f64,
    pub il_osm_db: f64,
    pub obl_osm_db: f64,
    pub il_mrr_db: f64,
    pub obl_mrr_db: f64,
    pub il_penalty_db: f64,
    pub d_osm_mm: f64,
    pub q: f64,
    pub k: f64,
}

impl Default for OpticalLinkParams {
    fn default() -> Self {
        Self {
            p_laser_dbm: 10.0,
            r_pd: 1.2,
            r_l: 50.0,
            i_d: 35e-9,
            t: 300.0,
            rin_db_per_hz: -140.0,
            eta_wpe: 0.1,
            il_smf_db: 0.0,
            il_ec_db: 1.6,
            il_wg_db_per_mm: 0.3,
            el_splitter_db: 0.01,
            il_osm_db: 4.0,
            obl_osm_db: 0.01,
            il_mrr_db: 0.01,
            obl_mrr_db: 0.01,
            il_penalty_db: 7.3,
            d_osm_mm: 0.02,
            q: ELECTRON_CHARGE,
            k: BOLTZMANN,
        }
    }
}

impl OpticalLinkParams {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let finite = [
            ("p_laser_dbm", self.p_laser_dbm),
            ("r_pd", self.r_pd),
            ("r_l", self.r_l),
            ("i_d", self.i_d),
            ("t", self.t),
            ("eta_wpe", self.eta_wpe),
            ("d_osm_mm", self.d_osm_mm),
            ("q", self.q),
            ("k", self.k),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                errs.push(format!("{name} must be finite"));
            }
        }
        if self.rin_db_per_hz.is_nan() || self.rin_db_per_hz == f64::INFINITY {
            errs.push("rin_db_per_hz must be a number below +inf".into());
        }
        for (name, v) in self.losses() {
            if !(v >= 0.0 && v.is_finite()) {
                errs.push(format!("{name} must be a finite loss >= 0, got {v}"));
            }
        }
        if !(self.r_pd > 0.0) {
            errs.push("r_pd must be > 0".into());
        }
        if !(self.r_l > 0.0) {
            errs.push("r_l must be > 0".into());
        }
        if !(self.eta_wpe > 0.0 && self.eta_wpe <= 1.0) {
            errs.push("eta_wpe must be in (0, 1]".into());
        }
        for (name, v) in [("i_d", self.i_d), ("t", self.t), ("d_osm_mm", self.d_osm_mm), ("q", self.q), ("k", self.k)] {
            if v < 0.0 {
                errs.push(format!("{name} must be >= 0"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    fn losses(&self) -> [(&'static str, f64); 10] {
        [
            ("il_smf_db", self.il_smf_db),
            ("il_ec_db", self.il_ec_db),
            ("il_wg_db_per_mm", self.il_wg_db_per_mm),
            ("el_splitter_db", self.el_splitter_db),
            ("il_osm_db", self.il_osm_db),
            ("obl_osm_db", self.obl_osm_db),
            ("il_mrr_db", self.il_mrr_db),
            ("obl_mrr_db", self.obl_mrr_db),
            ("il_penalty_db", self.il_penalty_db),
            ("d_osm_mm", self.d_osm_mm),
        ]
    }

    pub fn rin_linear(&self) -> f64 {
        db_to_linear(self.rin_db_per_hz)
    }
}

/// How the receiver bandwidth relates to the bitrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrInterpretation {
    /// `DR = BR · 2^B`.
    #[default]
    #[serde(rename = "br_times_2pow_b")]
    BrTimes2powB,
    /// `DR = BR`.
    BrOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub bits: u32,
    /// Bits per second.
    pub bitrate: f64,
    pub b_res_target: f64,
    pub dr_interpretation: DrInterpretation,
    #[serde(rename = "M_equals_N")]
    pub m_equals_n: bool,
    /// VDPE count used when `M_equals_N` is false.
    pub m_fixed: Option<u32>,
    /// Adds the wall-plug term to the laser budget.
    pub wall_plug: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            bits: 8,
            bitrate: 30e9,
            b_res_target: 1.0,
            dr_interpretation: DrInterpretation::BrTimes2powB,
            m_equals_n: true,
            m_fixed: None,
            wall_plug: false,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(1..=16).contains(&self.bits) {
            errs.push(format!("bits must be in 1..=16, got {}", self.bits));
        }
        if !(self.bitrate > 0.0 && self.bitrate.is_finite()) {
            errs.push("bitrate must be > 0".into());
        }
        if !(self.b_res_target >= 1.0 && self.b_res_target.is_finite()) {
            errs.push("b_res_target must be >= 1".into());
        }
        if !self.m_equals_n && !matches!(self.m_fixed, Some(m) if m >= 1) {
            errs.push("m_fixed >= 1 is required when M_equals_N is false".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    /// Receiver data rate in Hz.
    pub fn data_rate(&self) -> f64 {
        match self.dr_interpretation {
            DrInterpretation::BrTimes2powB => self.bitrate * f64::from(1u32 << self.bits),
            DrInterpretation::BrOnly => self.bitrate,
        }
    }

    fn m_for(&self, n: u32) -> u32 {
        if self.m_equals_n {
            n
        } else {
            self.m_fixed.unwrap_or(1)
        }
    }
}

fn positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(vec![format!("{what} must be positive and finite, got {v}")]))
    }
}

/// Receiver noise density `β` (A/√Hz) from shot, thermal and RIN terms.
pub fn noise_beta(p_pd_w: f64, params: &OpticalLinkParams) -> Result<f64> {
    positive("P_pd", p_pd_w)?;
    let r = params.r_pd;
    let shot = 2.0 * params.q * (r * p_pd_w + params.i_d);
    let thermal = 4.0 * params.k * params.t / params.r_l;
    let rin = r * r * p_pd_w * p_pd_w * params.rin_linear();
    Ok((shot + thermal + rin).sqrt())
}

/// Achievable bit resolution at the receiver. Returns `-inf` when the
/// signal-to-noise ratio is not positive.
pub fn bit_resolution(p_pd_w: f64, data_rate_hz: f64, params: &OpticalLinkParams) -> Result<f64> {
    positive("DR", data_rate_hz)?;
    let beta = noise_beta(p_pd_w, params)?;
    let arg = params.r_pd * p_pd_w / (beta * (data_rate_hz / std::f64::consts::SQRT_2).sqrt());
    if !(arg > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((20.0 * arg.log10() - 1.76) / 6.02)
}

/// Smallest photodetector power, in dBm, that reaches `cfg.b_res_target`.
pub fn solve_pd_sensitivity(cfg: &SolveConfig, params: &OpticalLinkParams) -> Result<f64> {
    cfg.validate()?;
    params.validate()?;
    let dr = cfg.data_rate();
    let f = |dbm: f64| bit_resolution(dbm_to_watts(dbm), dr, params).map(|b| b - cfg.b_res_target);
    let (mut lo, mut hi) = SENSITIVITY_BRACKET_DBM;
    let no_root = Error::NoRoot { lo_dbm: lo, hi_dbm: hi };
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(no_root);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let root = 0.5 * (lo + hi);
    if f(root)?.abs() > RESOLUTION_TOLERANCE {
        return Err(no_root);
    }
    Ok(root)
}

/// One named contribution to the laser budget, in dB (or dBm for the
/// starting term).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetTerm {
    pub name: &'static str,
    pub db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaserBudget {
    pub n: u32,
    pub m: u32,
    pub terms: Vec<BudgetTerm>,
    pub total_dbm: f64,
}

/// Per-laser power needed to deliver `p_pd_dbm` to every photodetector of an
/// `N`-wavelength, `M`-way VDPC, summed in dB.
pub fn laser_power_required(
    n: u32,
    m: u32,
    p_pd_dbm: f64,
    params: &OpticalLinkParams,
    wall_plug: bool,
) -> Result<LaserBudget> {
    if n == 0 {
        return Err(Error::range("N", 0, 1, i64::from(u32::MAX)));
    }
    if m == 0 {
        return Err(Error::range("M", 0, 1, i64::from(u32::MAX)));
    }
    let (nf, mf) = (f64::from(n), f64::from(m));
    let mut terms = vec![
        BudgetTerm { name: "p_pd", db: p_pd_dbm },
        BudgetTerm {
            name: "waveguide",
            db: params.il_wg_db_per_mm * nf * params.d_osm_mm,
        },
        BudgetTerm {
            name: "split_fanout",
            db: linear_to_db(mf),
        },
        BudgetTerm {
            name: "splitter_excess",
            db: params.el_splitter_db * mf.log2(),
        },
        BudgetTerm {
            name: "ring_through",
            db: (params.obl_osm_db + params.obl_mrr_db) * (nf - 1.0),
        },
        BudgetTerm { name: "il_ec", db: params.il_ec_db },
        BudgetTerm { name: "il_smf", db: params.il_smf_db },
        BudgetTerm { name: "il_osm", db: params.il_osm_db },
        BudgetTerm { name: "il_mrr", db: params.il_mrr_db },
        BudgetTerm {
            name: "il_penalty",
            db: params.il_penalty_db,
        },
    ];
    if wall_plug {
        terms.push(BudgetTerm {
            name: "wall_plug",
            db: -linear_to_db(params.eta_wpe),
        });
    }
    let total_dbm = terms.iter().map(|t| t.db).sum();
    Ok(LaserBudget { n, m, terms, total_dbm })
}

/// Largest `N` whose laser budget fits `params.p_laser_dbm`, or 0 if even
/// `N = 1` does not.
pub fn max_supported_n(cfg: &SolveConfig, params: &OpticalLinkParams, p_pd_dbm: f64) -> Result<u32> {
    cfg.validate()?;
    params.validate()?;
    let fits = |n: u32| -> Result<bool> {
        let b = laser_power_required(n, cfg.m_for(n), p_pd_dbm, params, cfg.wall_plug)?;
        Ok(b.total_dbm <= params.p_laser_dbm)
    };
    if !fits(1)? {
        return Ok(0);
    }
    let mut lo = 1u32;
    let mut hi = 2u32;
    while fits(hi)? {
        lo = hi;
        if hi >= MAX_SEARCH_N {
            return Ok(MAX_SEARCH_N);
        }
        hi = (hi * 2).min(MAX_SEARCH_N);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One row of the sensitivity / size sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase")]
pub struct SweepRow {
    #[serde(rename = "B")]
    pub bits: u32,
    #[serde(rename = "BR")]
    pub bitrate: f64,
    #[serde(rename = "DR")]
    pub data_rate: f64,
    #[serde(rename = "P_pd_dbm")]
    pub p_pd_dbm: Option<f64>,
    #[serde(rename = "N_max")]
    pub n_max: Option<u32>,
    #[serde(rename = "P_laser_required_dbm")]
    pub p_laser_required_dbm: Option<f64>,
}

/// Solves the sensitivity and maximum size for every `(B, BR)` pair. Rows
/// without a root in the bracket carry `None`.
pub fn sweep(base: &SolveConfig, params: &OpticalLinkParams, bits: &[u32], bitrates: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(bits.len() * bitrates.len());
    for &b in bits {
        for &br in bitrates {
            let cfg = SolveConfig {
                bits: b,
                bitrate: br,
                ..base.clone()
            };
            cfg.validate()?;
            let (p_pd_dbm, n_max, p_laser) = match solve_pd_sensitivity(&cfg, params) {
                Ok(p) => {
                    let n = max_supported_n(&cfg, params, p)?;
                    let laser = if n > 0 {
                        Some(laser_power_required(n, cfg.m_for(n), p, params, cfg.wall_plug)?.total_dbm)
                    } else {
                        None
                    };
                    (Some(p), Some(n), laser)
                }
                Err(Error::NoRoot { .. }) => (None, None, None),
                Err(e) => return Err(e),
            };
            rows.push(SweepRow {
                bits: b,
                bitrate: br,
                data_rate: cfg.data_rate(),
                p_pd_dbm,
                n_max,
                p_laser_required_dbm: p_laser,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn thermal_only() -> OpticalLinkParams {
        OpticalLinkParams {
            q: 0.0,
            i_d: 0.0,
            rin_db_per_hz: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    fn lossless() -> OpticalLinkParams {
        OpticalLinkParams {
            il_smf_db: 0.0,
            il_ec_db: 0.0,
            il_wg_db_per_mm: 0.0,
            el_splitter_db: 0.0,
            il_osm_db: 0.0,
            obl_osm_db: 0.0,
            il_mrr_db: 0.0,
            obl_mrr_db: 0.0,
            il_penalty_db: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn thermal_floor() {
        let p = thermal_only();
        let floor = (4.0 * p.k * p.t / p.r_l).sqrt();
        let b = noise_beta(1e-15, &OpticalLinkParams { rin_db_per_hz: f64::NEG_INFINITY, i_d: 0.0, ..p.clone() }).unwrap();
        assert!((noise_beta(1e-3, &p).unwrap() - floor).abs() < 1e-24);
        assert!((b - floor).abs() / floor < 1e-6);
    }

    #[test]
    fn beta_term_by_term_at_design_point() {
        let p = OpticalLinkParams::default();
        let pw = dbm_to_watts(-28.0);
        // 1.5849e-6 W -> photocurrent 1.9019e-6 A
        let shot = 2.0 * 1.602_176_634e-19 * (1.2 * 1.584_893_192e-6 + 35e-9);
        let thermal = 4.0 * 1.380_649e-23 * 300.0 / 50.0;
        let rin = (1.2f64 * 1.584_893_192e-6).powi(2) * 1e-14;
        let want = (shot + thermal + rin).sqrt();
        assert!((noise_beta(pw, &p).unwrap() - want).abs() / want < 1e-9);
        assert!((thermal - 3.313_557_6e-22).abs() < 1e-28);
    }

    #[test]
    fn doubling_load_halves_thermal_only() {
        let p = OpticalLinkParams::default();
        let pw = 1e-5;
        let sq = |p: &OpticalLinkParams| noise_beta(pw, p).unwrap().powi(2);
        let p2 = OpticalLinkParams { r_l: 2.0 * p.r_l, ..p.clone() };
        let thermal = 4.0 * p.k * p.t / p.r_l;
        assert!(((sq(&p) - sq(&p2)) - thermal / 2.0).abs() / thermal < 1e-9);
    }

    #[test]
    fn nonpositive_power_rejected() {
        let p = OpticalLinkParams::default();
        assert!(noise_beta(0.0, &p).is_err());
        assert!(bit_resolution(-1.0, 1e9, &p).is_err());
        assert!(bit_resolution(1e-3, 0.0, &p).is_err());
    }

    #[test]
    fn inverted_closed_form_gives_one_bit() {
        let p = thermal_only();
        let dr = 30e9;
        let beta = noise_beta(1e-3, &p).unwrap();
        let pw = 10f64.powf(7.78 / 20.0) * beta * (dr / std::f64::consts::SQRT_2).sqrt() / p.r_pd;
        assert!((bit_resolution(pw, dr, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solver_matches_thermal_closed_form() {
        let p = thermal_only();
        for (target, interp) in [(1.0, DrInterpretation::BrOnly), (3.0, DrInterpretation::BrTimes2powB)] {
            let cfg = SolveConfig {
                b_res_target: target,
                dr_interpretation: interp,
                ..Default::default()
            };
            let beta = (4.0 * p.k * p.t / p.r_l).sqrt();
            let x = 10f64.powf((6.02 * target + 1.76) / 20.0);
            let want = watts_to_dbm(x * beta * (cfg.data_rate() / std::f64::consts::SQRT_2).sqrt() / p.r_pd);
            let got = solve_pd_sensitivity(&cfg, &p).unwrap();
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn solver_round_trips_both_interpretations() {
        let p = OpticalLinkParams::default();
        for interp in [DrInterpretation::BrTimes2powB, DrInterpretation::BrOnly] {
            let cfg = SolveConfig {
                dr_interpretation: interp,
                ..Default::default()
            };
            let dbm = solve_pd_sensitivity(&cfg, &p).unwrap();
            let b = bit_resolution(dbm_to_watts(dbm), cfg.data_rate(), &p).unwrap();
            assert!((b - 1.0).abs() <= RESOLUTION_TOLERANCE);
            assert!(dbm > -60.0 && dbm < 0.0);
        }
    }

    #[test]
    fn unreachable_target_reports_bracket() {
        let cfg = SolveConfig {
            b_res_target: 40.0,
            ..Default::default()
        };
        assert_eq!(
            solve_pd_sensitivity(&cfg, &OpticalLinkParams::default()),
            Err(Error::NoRoot { lo_dbm: -60.0, hi_dbm: 0.0 })
        );
    }

    #[test]
    fn lossless_single_channel_budget_is_p_pd() {
        let b = laser_power_required(1, 1, -28.0, &lossless(), false).unwrap();
        assert_eq!(b.total_dbm, -28.0);
    }

    #[test]
    fn hand_summed_ledger_at_design_point() {
        let b = laser_power_required(176, 176, -28.0, &OpticalLinkParams::default(), false).unwrap();
        // -28 + 1.056 + 22.4551 + 0.0746 + 3.5 + 1.6 + 0 + 4 + 0.01 + 7.3
        assert!((b.total_dbm - 11.995_76).abs() < 1e-4, "{}", b.total_dbm);
        let wp = laser_power_required(176, 176, -28.0, &OpticalLinkParams::default(), true).unwrap();
        assert!((wp.total_dbm - b.total_dbm - 10.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_m_adds_split_loss() {
        let p = OpticalLinkParams::default();
        let a = laser_power_required(50, 32, -20.0, &p, false).unwrap().total_dbm;
        let b = laser_power_required(50, 64, -20.0, &p, false).unwrap().total_dbm;
        assert!((b - a - (linear_to_db(2.0) + p.el_splitter_db)).abs() < 1e-12);
    }

    #[test]
    fn max_n_design_point_and_boundary() {
        let p = OpticalLinkParams::default();
        let cfg = SolveConfig::default();
        let n = max_supported_n(&cfg, &p, -28.0).unwrap();
        assert_eq!(n, 138);
        let need1 = laser_power_required(1, 1, -28.0, &p, false).unwrap().total_dbm;
        let exact = OpticalLinkParams { p_laser_dbm: need1, ..p.clone() };
        assert_eq!(max_supported_n(&cfg, &exact, -28.0).unwrap(), 1);
        let short = OpticalLinkParams { p_laser_dbm: need1 - 1e-9, ..p };
        assert_eq!(max_supported_n(&cfg, &short, -28.0).unwrap(), 0);
    }

    #[test]
    fn unbounded_when_nothing_grows() {
        let cfg = SolveConfig {
            m_equals_n: false,
            m_fixed: Some(1),
            ..Default::default()
        };
        assert_eq!(max_supported_n(&cfg, &lossless(), -28.0).unwrap(), MAX_SEARCH_N);
    }

    #[test]
    fn params_json_defaults_and_rejection() {
        let p = OpticalLinkParams::from_json_str(r#"{"p_laser_dbm": 12.0}"#).unwrap();
        assert_eq!(p.p_laser_dbm, 12.0);
        assert_eq!(p.il_penalty_db, 7.3);
        assert!(OpticalLinkParams::from_json_str(r#"{"laser": 1}"#).is_err());
        assert!(matches!(
            OpticalLinkParams::from_json_str(r#"{"il_osm_db": -1}"#),
            Err(Error::InvalidConfig(_))
        ));
        let back: OpticalLinkParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn sweep_rows() {
        let rows = sweep(&SolveConfig::default(), &OpticalLinkParams::default(), &[4, 8], &[10e9, 30e9]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.p_pd_dbm.is_some()));
        assert_eq!(rows[3].data_rate, 30e9 * 256.0);
    }

    fn params_strategy() -> impl Strategy<Value = OpticalLinkParams> {
        (
            0.1f64..2.0,
            10.0f64..1000.0,
            0.0f64..1e-6,
            1.0f64..400.0,
            -170.0f64..-110.0,
            proptest::array::uniform8(0.0f64..2.0),
            0.001f64..0.1,
        )
            .prop_map(|(r_pd, r_l, i_d, t, rin, l, d)| OpticalLinkParams {
                r_pd,
                r_l,
                i_d,
                t,
                rin_db_per_hz: rin,
                il_ec_db: l[0],
                il_wg_db_per_mm: l[1],
                el_splitter_db: l[2] * 0.1,
                il_osm_db: l[3],
                obl_osm_db: l[4] * 0.05,
                obl_mrr_db: l[5] * 0.05,
                il_penalty_db: l[6] * 5.0,
                il_mrr_db: l[7],
                d_osm_mm: d,
                ..Default::default()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn monotone_everywhere(
            p in params_strategy(),
            dbm in -60.0f64..-1.0,
            step in 0.01f64..10.0,
            dr in 1e8f64..1e13,
            n in 1u32..400,
            m in 1u32..400,
            laser in -10.0f64..20.0,
        ) {
            let (w0, w1) = (dbm_to_watts(dbm), dbm_to_watts(dbm + step.min(1.0)));
            prop_assert!(noise_beta(w1, &p)? > noise_beta(w0, &p)?);
            prop_assert!(bit_resolution(w1, dr, &p)? > bit_resolution(w0, dr, &p)?);
            prop_assert!(bit_resolution(w0, dr * 2.0, &p)? < bit_resolution(w0, dr, &p)?);
            let base = laser_power_required(n, m, dbm, &p, false)?.total_dbm;
            prop_assert!(laser_power_required(n + 1, m, dbm, &p, false)?.total_dbm >= base);
            prop_assert!(laser_power_required(n, m + 1, dbm, &p, false)?.total_dbm > base);
            let cfg = SolveConfig::default();
            let lo = OpticalLinkParams { p_laser_dbm: laser, ..p.clone() };
            let hi = OpticalLinkParams { p_laser_dbm: laser + step, ..p };
            prop_assert!(max_supported_n(&cfg, &hi, dbm)? >= max_supported_n(&cfg, &lo, dbm)?);
        }

        #[test]
        fn db_conversions_invert(x in -200.0f64..200.0) {
            let back = watts_to_dbm(dbm_to_watts(x));
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
            let lin = db_to_linear(x);
            prop_assert!((db_to_linear(linear_to_db(lin)) - lin).abs() <= 1e-12 * lin);
        }
    }
}
