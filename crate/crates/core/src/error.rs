use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sieve configuration: {0}")]
    Config(String),

    #[error("empty residue set L_{p} for a sieving prime below z")]
    EmptyResidues { p: u64 },

    #[error("degenerate sieve at p = {p}: lambda(p) = {lambda} is not below p")]
    Degenerate { p: u64, lambda: u64 },

    #[error("malformed residue list for p = {p}: {reason}")]
    MalformedResidues { p: u64, reason: String },

    #[error("sieving window [{lo}, {hi}) is not contained in [2, z = {z}]")]
    Window { lo: f64, hi: f64, z: f64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("modulus q = {q} is not admissible for the majorant table: {reason}")]
    Modulus { q: u64, reason: String },

    #[error("imaginary residue {im:e} of beta exceeds tolerance")]
    ImaginaryResidue { im: f64 },

    #[error("coefficient profile support is not contained in the sifted set (n = {n})")]
    Support { n: u64 },

    #[error("coefficient |a_{n}| = {modulus} exceeds 1")]
    CoefficientBound { n: u64, modulus: f64 },

    #[error("frequency function is identically zero")]
    ZeroFunction,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("explicit constant overflows at ell = {ell} (endpoint blow-up)")]
    Blowup { ell: f64 },

    #[error("linear factorisation has zero discriminant")]
    ZeroDiscriminant,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
