pub mod cross_engine;
pub mod halfplane;
pub mod invariance;
pub mod lemmas;
pub mod generator_oracle;
pub mod roundtrip;
pub mod tables;
pub mod transport;
