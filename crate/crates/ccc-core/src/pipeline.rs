//! placeholder
#[derive(Clone, Debug)]
pub struct CertifiedCode;
#[derive(Clone, Debug)]
pub enum CodeStatus { Optimal }
