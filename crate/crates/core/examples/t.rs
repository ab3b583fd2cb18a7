use scopt::{arch::*, sim::*, workload::bundled};
fn main(){
 let accs: Vec<_> = PRESET_NAMES.iter().map(|n| build_accelerator(&preset(n).unwrap(), &Default::default()).unwrap()).collect();
 let nets: Vec<_> = bundled::ALL.iter().map(|(n,_)| bundled::load(n).unwrap()).collect();
 let t=std::time::Instant::now();
 let c = compare(&nets, &accs).unwrap();
 println!("{:?}", t.elapsed());
 for m in &c.metrics { println!("{:14} {:14} fps={:.1} fpw={:.3} lat={:.3e} E={:.3e} waves={}", m.network, m.accelerator, m.fps.unwrap(), m.fps_per_watt.unwrap(), m.total_latency_s, m.total_energy_j, m.diagnostics.waves); println!("   {:?}", m.energy);}
 for g in &c.gmeans { println!("{:?}", g); }
}
