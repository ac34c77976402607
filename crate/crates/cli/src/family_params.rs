//! Family lookup shared by `chipfire gen` and `GET /api/families/{name}`.

use chipfire::families::{hybrid_example, intro_example, random_instance, star_example, FamilyError};
use chipfire::{Instance, Rational};
use clap::Args;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct FamilyParams {
    /// Vertex count (star, random) or the clique-plus-pendant count (hybrid).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Edge probability for random graphs, as p/q.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub enum FamilyRequestError {
    UnknownFamily(String),
    Invalid(String),
}

impl std::fmt::Display for FamilyRequestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyRequestError::UnknownFamily(name) => write!(
                f,
                "unknown family `{name}` (expected intro, star, hybrid or random)"
            ),
            FamilyRequestError::Invalid(why) => f.write_str(why),
        }
    }
}

impl From<FamilyError> for FamilyRequestError {
    fn from(e: FamilyError) -> Self {
        FamilyRequestError::Invalid(e.to_string())
    }
}

pub fn build_family(name: &str, params: &FamilyParams) -> Result<Instance, FamilyRequestError> {
    match name {
        "intro" => Ok(intro_example()),
        "star" => Ok(star_example(params.n.unwrap_or(5), params.k.unwrap_or(2))?),
        "hybrid" => Ok(hybrid_example(params.n.unwrap_or(4), params.k.unwrap_or(1))?),
        "random" => {
            let p = match &params.p {
                Some(text) => text.parse::<Rational>().map_err(FamilyRequestError::Invalid)?,
                None => Rational::new(1, 2),
            };
            Ok(random_instance(
                params.n.unwrap_or(5),
                p,
                (params.min.unwrap_or(-3), params.max.unwrap_or(3)),
                params.seed.unwrap_or(0),
            )?)
        }
        other => Err(FamilyRequestError::UnknownFamily(other.to_string())),
    }
}
