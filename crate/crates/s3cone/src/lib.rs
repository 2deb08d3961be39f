pub mod bach_operator;
pub mod cone_calculus;
pub mod error;
pub mod indicial_classifier;
pub mod numerics;
pub mod scalar;
pub mod s3_tensor_calculus;
pub mod su2_frame;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub type Rational = num_rational::Rational64;
pub type Poly = su2_frame::Polynomial<f64>;
pub type ExactPoly = su2_frame::Polynomial<Rational>;
pub type Quadrature = su2_frame::QuadratureRule<f64>;
pub type SeparatedTensor = cone_calculus::SeparatedTensor<f64>;
pub type TensorField = s3_tensor_calculus::TensorFieldS3<f64>;
pub type ExactTensorField = s3_tensor_calculus::TensorFieldS3<Rational>;
