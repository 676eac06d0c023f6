//! Compact planar sets: self-similar Cantor sets, Koch-type curves, and
//! finite-perimeter regions, with δ-neighbourhood rasterisation.

mod ifs;
mod mask;
mod region;
mod sample;
mod snowflake;

pub use ifs::{ifs_sample, ifs_sample_with_budget, IfsSpec, Similarity};
pub use mask::{delta_mask, DeltaMask};
pub use region::{region_make, BoundaryCurve, Region, RegionSpec};
pub use sample::{Cell, SampleDoc, SampleMetadata, SampleOrigin, SetSample};
pub use snowflake::{snowflake_sample, snowflake_sample_with_budget, SnowflakeCurve};
