//! Spoken-digit style recognition with a two-layer spiking network of
//! Izhikevich neurons trained by spike-timing-dependent plasticity.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64` and [`single`] to `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod corpus;
mod error;
pub mod features;
pub mod izhikevich;
pub mod pipeline;
mod scalar;
pub mod signatures;
pub mod snn;
pub mod synapse;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type AudioClip = corpus::AudioClip<f64>;
pub type FeatureMatrix = features::FeatureMatrix<f64>;
pub type BandSpec = features::BandSpec<f64>;
pub type Framing = features::Framing<f64>;
pub type CurrentScaler = features::CurrentScaler<f64>;
pub type IzhikevichParams = izhikevich::IzhikevichParams<f64>;
pub type SpikeTrain = izhikevich::SpikeTrain<f64>;
pub type SynapseMatrix = synapse::SynapseMatrix<f64>;
pub type NetworkConfig = snn::NetworkConfig<f64>;
pub type StdpConfig = snn::StdpConfig<f64>;
pub type Signature = signatures::Signature<f64>;
pub type PrototypeSet = signatures::PrototypeSet<f64>;

/// Single-precision aliases.
pub mod single {
    pub type AudioClip = crate::corpus::AudioClip<f32>;
    pub type FeatureMatrix = crate::features::FeatureMatrix<f32>;
    pub type BandSpec = crate::features::BandSpec<f32>;
    pub type Framing = crate::features::Framing<f32>;
    pub type CurrentScaler = crate::features::CurrentScaler<f32>;
    pub type IzhikevichParams = crate::izhikevich::IzhikevichParams<f32>;
    pub type SpikeTrain = crate::izhikevich::SpikeTrain<f32>;
    pub type SynapseMatrix = crate::synapse::SynapseMatrix<f32>;
    pub type NetworkConfig = crate::snn::NetworkConfig<f32>;
    pub type StdpConfig = crate::snn::StdpConfig<f32>;
    pub type Signature = crate::signatures::Signature<f32>;
    pub type PrototypeSet = crate::signatures::PrototypeSet<f32>;
}
