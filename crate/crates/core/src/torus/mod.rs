//! Toroidal grids, neighbourhoods, threshold dynamics and path parity.

mod cellset;
mod dynamics;
mod grid;
mod io;

pub use cellset::{cells_with_state, neighborhood, path_parity, set_neighborhood, CellSet, Mode};
pub use dynamics::{
    apply_rule, classify_all, classify_cell, complement, find_period, is_cell_stable, is_stable, next_state_with,
    two_steps_with, CellClass, Period, Rule,
};
pub use grid::{cyclic_distance, Cell, Neighbors, TorusConfig};
pub use io::{format_grid, parse_grid};
pub(crate) use grid::neighbors_in;
