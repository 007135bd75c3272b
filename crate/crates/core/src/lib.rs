pub mod atoms;
pub mod estimator;
pub mod exponents;
pub mod fit;
pub mod propagator;
pub mod whitney;
