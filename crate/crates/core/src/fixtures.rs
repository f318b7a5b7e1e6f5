//! Bundled example network.

use crate::network::{parse_network, NetworkModel};

/// One SG, one IBR and two load junctions; the protected line joins the
/// two junctions.
pub const FOUR_BUS: &str = include_str!("../fixtures/four_bus.toml");

pub fn four_bus() -> NetworkModel {
    parse_network(FOUR_BUS).expect("bundled fixture is valid")
}
