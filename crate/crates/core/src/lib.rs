//! One-shot statistical mechanics for thermodynamic resource theories.
//!
//! The numerical routines are generic over the scalar type through
//! [`num::Real`]; the aliases below fix it to `f64`, which is what the
//! command-line front end and most callers want.

pub mod catalysis;
pub mod entropies;
pub mod error;
pub mod fluctuation;
pub mod io;
pub mod measurement;
pub mod num;
pub mod rng;
pub mod states;
pub mod thermal_ops;
pub mod work;

pub use error::{Error, Result};

pub type EnergyLevels = states::EnergyLevels<f64>;
pub type InverseTemperature = states::InverseTemperature<f64>;
pub type QuasiState = states::QuasiState<f64>;
pub type DensityState = states::DensityState<f64>;
pub type WorkBit = states::WorkBit<f64>;
pub type CMatrix = states::CMatrix<f64>;
pub type Alpha = entropies::Alpha<f64>;
pub type SmoothingParameter = entropies::SmoothingParameter<f64>;
pub type BathSpec = thermal_ops::BathSpec<f64>;
pub type StochasticMap = thermal_ops::StochasticMap<f64>;
pub type TransformVerdict = thermal_ops::TransformVerdict<f64>;
pub type LorenzCurve = thermal_ops::LorenzCurve<f64>;
pub type WorkQuantity = work::WorkQuantity<f64>;
pub type Catalyst = catalysis::Catalyst<f64>;
pub type EmbezzleReport = catalysis::EmbezzleReport<f64>;
pub type Povm = measurement::Povm<f64>;
pub type MeasurementLedger = measurement::MeasurementLedger<f64>;
pub type Protocol = fluctuation::Protocol<f64>;
pub type Segment = fluctuation::Segment<f64>;
pub type WorkDistribution = fluctuation::WorkDistribution<f64>;
pub type Trajectory = fluctuation::Trajectory<f64>;
