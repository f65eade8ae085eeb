//! Experiments on the 2-weight of functions and of `AND_n`.

pub mod bfs;
pub mod pairs;
pub mod sampling;

pub use bfs::{bfs_min_weight, Generators, WeightWitness, MAX_BFS_VARS};
pub use pairs::{pair_sums_to_and, scan_complementary_pairs};
pub use sampling::{
    enumerate_weight3, normal_form_class_sizes, occupancy_grid, sample_histogram,
    sample_histogram_partitioned, sample_tables, Histogram, OccupancyGrid, SampleStreams,
    SumSampler, Weight3Enumeration,
};
