"""Entropy-scaled potential fields for legible grasp trajectories in clutter."""

from .baseline import BaselineConfig, gen_baseline_traj
from .clutter import (ClutterResult, GaussianFit, clutteredness,
                      cross_entropy_uniform, differential_entropy, fit_gaussian,
                      kl_divergence, kl_numeric_oracle)
from .fields import (FieldConfig, PotentialField, build_field, gen_legible_traj,
                     line_proximity, smooth, total_gradient, total_potential)
from .legibility import (OBSERVER_POINT_POSITION, OBSERVER_VELOCITY, RankedGuess,
                         compare_planners, observer_rank, rank_distance,
                         section_trajectory)
from .scene import (Scene, SceneObject, WorkspaceBounds, generate_cluttered_scene,
                    generate_uncluttered_scene, load_scene, nearest_object,
                    save_scene)
from .trajectory import PLANNER_BASELINE, PLANNER_POTENTIAL_FIELD, Trajectory

__version__ = "0.1.0"
