//! The limit surface density `φ(ν) = F(ν·Σ)`, its unit ball and limit
//! perimeters of polygons.

mod density;
mod polygon;

pub use density::{frank_diagram_csv, AnisotropyDensity, FrankPoint};
pub use polygon::{
    axis_box_perimeter, perimeter_csv, polyhedral_perimeter, EdgeContribution, PerimeterReport,
    PolyhedralSet, Rect,
};
