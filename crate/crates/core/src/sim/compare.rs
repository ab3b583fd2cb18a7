use serde::Serialize;

use super::engine::{simulate, SimMetrics};
use super::schedule::map_network;
use crate::arch::Accelerator;
use crate::error::{Error, Result};
use crate::workload::NetworkSpec;

pub const METRICS: [&str; 3] = ["fps", "fps_per_watt", "fps_per_watt_per_mm2"];

fn metric(m: &SimMetrics, name: &str) -> Option<f64> {
    match name {
        "fps" => m.fps,
        "fps_per_watt" => m.fps_per_watt,
        "fps_per_watt_per_mm2" => m.fps_per_watt_per_mm2,
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub network: String,
    pub numerator: String,
    pub denominator: String,
    pub metric: &'static str,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmeanRow {
    pub numerator: String,
    pub denominator: String,
    pub metric: &'static str,
    pub gmean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// Network-major, accelerators in input order.
    pub metrics: Vec<SimMetrics>,
    pub ratios: Vec<RatioRow>,
    pub gmeans: Vec<GmeanRow>,
}

/// Geometric mean, `exp(mean(ln x))`. `None` for an empty or non-positive input.
pub fn gmean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0)) {
        return None;
    }
    Some((xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp())
}

/// Simulates every network on every accelerator and forms the ratios
/// `metric(a_i) / metric(a_j)` for `i < j`, per network and as gmeans.
pub fn compare(networks: &[NetworkSpec], accels: &[Accelerator]) -> Result<Comparison> {
    if networks.is_empty() || accels.len() < 2 {
        return Err(Error::InvalidConfig(vec![format!(
            "compare needs at least 1 network and 2 accelerators, got {} and {}",
            networks.len(),
            accels.len()
        )]));
    }
    let schedules = networks
        .iter()
        .flat_map(|net| accels.iter().map(move |a| map_network(net, a, a.config.n).map(|s| (a, s))))
        .collect::<Result<Vec<_>>>()?;
    let metrics: Vec<SimMetrics> = std::thread::scope(|scope| {
        let handles: Vec<_> = schedules
            .iter()
            .map(|(a, s)| scope.spawn(move || simulate(a, s)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation thread")).collect()
    });

    let k = accels.len();
    let mut ratios = Vec::new();
    let mut gmeans = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for name in METRICS {
                let mut per_net = Vec::new();
                for (ni, net) in networks.iter().enumerate() {
                    let (a, b) = (&metrics[ni * k + i], &metrics[ni * k + j]);
                    let r = metric(a, name).zip(metric(b, name)).map(|(x, y)| x / y);
                    per_net.push(r);
                    ratios.push(RatioRow {
                        network: net.name.clone(),
                        numerator: a.accelerator.clone(),
                        denominator: b.accelerator.clone(),
                        metric: name,
                        ratio: r,
                    });
                }
                let all: Option<Vec<f64>> = per_net.into_iter().collect();
                gmeans.push(GmeanRow {
                    numerator: metrics[i].accelerator.clone(),
                    denominator: metrics[j].accelerator.clone(),
                    metric: name,
                    gmean: all.and_then(|v| gmean(&v)),
                });
            }
        }
    }
    Ok(Comparison { metrics, ratios, gmeans })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:?}"))
}

impl Comparison {
    /// `network,accelerator,metric,value`
    pub fn long_csv(&self) -> String {
        let mut s = String::from("network,accelerator,metric,value\n");
        for m in &self.metrics {
            let rows = [
                ("fps", m.fps),
                ("fps_per_watt", m.fps_per_watt),
                ("fps_per_watt_per_mm2", m.fps_per_watt_per_mm2),
                ("latency_s", Some(m.total_latency_s)),
                ("energy_j", Some(m.total_energy_j)),
                ("area_mm2", Some(m.area_mm2)),
            ];
            for (name, v) in rows {
                s.push_str(&format!("{},{},{},{}\n", m.network, m.accelerator, name, opt(v)));
            }
        }
        s
    }

    /// `network,numerator,denominator,metric,ratio`, with `gmean` rows last.
    pub fn ratio_csv(&self) -> String {
        let mut s = String::from("network,numerator,denominator,metric,ratio\n");
        for r in &self.ratios {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.network,
                r.numerator,
                r.denominator,
                r.metric,
                opt(r.ratio)
            ));
        }
        for g in &self.gmeans {
            s.push_str(&format!(
                "gmean,{},{},{},{}\n",
                g.numerator,
                g.denominator,
                g.metric,
                opt(g.gmean)
            ));
        }
        s
    }

    pub fn gmean_of(&self, numerator: &str, denominator: &str, metric: &str) -> Option<f64> {
        self.gmeans
            .iter()
            .find(|g| g.numerator == numerator && g.denominator == denominator && g.metric == metric)
            .and_then(|g| g.gmean)
    }

    pub fn ratio_of(&self, network: &str, numerator: &str, denominator: &str, metric: &str) -> Option<f64> {
        self.ratios
            .iter()
            .find(|r| r.network == network && r.numerator == numerator && r.denominator == denominator && r.metric == metric)
            .and_then(|r| r.ratio)
    }
}
