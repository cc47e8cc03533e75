"""Incident classification experiments: python face of the C++ core.

Configs are plain dicts (or JSON strings) matching docs/run_config.schema.json;
reports come back as dicts.
"""

import json

try:
    from crimelab._crimelab import (  # installed layout
        ConfigError,
        DataError,
        __version__,
        accuracy,
        category_names,
        paired_t_test,
    )
    from crimelab import _crimelab as _core
except ImportError:  # build-tree layout: extension module directly on sys.path
    from _crimelab import (
        ConfigError,
        DataError,
        __version__,
        accuracy,
        category_names,
        paired_t_test,
    )
    import _crimelab as _core

__all__ = [
    "ConfigError",
    "DataError",
    "__version__",
    "accuracy",
    "category_names",
    "compare_report_files",
    "generate_synthetic_csv",
    "paired_t_test",
    "run_experiment",
    "run_experiment_to_files",
    "stats_to_files",
    "train_to_files",
]


def _config_text(config):
    if isinstance(config, str):
        return config
    return json.dumps(config)


def run_experiment(config, threads=1):
    """Run the configured evaluation protocol; returns the report dict."""
    return json.loads(_core.run_experiment_json(_config_text(config), threads))


def run_experiment_to_files(config, threads=1):
    """Like run_experiment, also writing report files under out_dir."""
    return json.loads(_core.run_experiment_to_files_json(_config_text(config), threads))


def train_to_files(config, threads=1):
    """Fit on the full dataset and write model files; returns a summary dict."""
    return json.loads(_core.train_json(_config_text(config), threads))


def stats_to_files(config, cell_size=0.005):
    """Write descriptive pivots and map grids; returns the stats dict."""
    return json.loads(_core.stats_json(_config_text(config), cell_size))


def compare_report_files(report_a, report_b, out_csv=""):
    """Paired t-test over two written reports; returns the comparison row."""
    return json.loads(_core.compare_files_json(str(report_a), str(report_b), str(out_csv)))


def generate_synthetic_csv(counts, path, dims=2, spread=1.0, seed=0, leaky=False):
    """Write a Gaussian-blob incident CSV in the raw snapshot schema."""
    _core.generate_synthetic_csv(list(counts), str(path), dims, spread, seed, leaky)
