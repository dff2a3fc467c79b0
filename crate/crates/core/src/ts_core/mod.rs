//! p-tempered α-stable laws: Rosiński and spectral measures, characteristic
//! exponents, Fourier inversion and component sampling.

pub mod cf;
pub mod config;
pub mod inversion;
pub mod measure;
pub mod params;
pub mod validate;

pub use cf::{inner_integral, inner_integral_numeric, inner_integral_p1, psi, TsLaw};
pub use config::parse_config;
pub use inversion::{gil_pelaez, sample_ts_component, ts_pdf_cdf, InversionTable, TableDiagnostics, TsComponent};
pub use measure::{
    rosinski_to_spectral, spectral_to_rosinski, Atom, DensityPart, FnDensity, QAtom, RosinskiMeasure,
    SpectralAtom, SpectralModel,
};
pub use params::{bdlp_levy_tail, characteristic_exponent, Model, TsouParams};
pub use validate::{validate_rosinski, Check, ValidationReport};
