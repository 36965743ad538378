//! Elliptic K3 surfaces in Weierstrass form.

pub mod curves;
pub mod exact;
pub mod families;
pub mod format;
pub mod forms;
pub mod kodaira;
pub mod modulipath;
pub mod weierstrass;
