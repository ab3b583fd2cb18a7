//! Bit-exact model of the stochastic datapath: stream generation, the
//! pair table, optical AND multiplication, sign-routed photo-charge
//! accumulation and read-out conversion.

pub mod adc;
pub mod bitstream;
pub mod lut;
pub mod study;
pub mod vdpe;

pub use adc::{adc_convert, AdcModel, AdcReading};
pub use bitstream::{encode_unipolar, osm_multiply, pca_accumulate, Bitstream, PrecisionConfig};
pub use lut::{generate_uncorrelated_pair, round_half_even, BitstreamLut, LutEntry};
pub use study::{measure_vdp_error, ErrorStats, VdpErrorReport, WeightSigns};
pub use vdpe::{Sign, SignedOperand, Vdpe, VdpeOutput};
