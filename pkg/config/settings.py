# config/settings.py

"""
osmoflow - Default Settings
Scheduler, cluster, performance-model, EOS campaign and TTL defaults
"""

class Settings:
    """
    Defaults for every component
    Overridden by the run config file and CLI flags (see config/run_config.py)
    """

    # ========== WORKFLOW MANAGER ==========
    WMS = {
        'policy': 'lpt',  # 'fifo' or 'lpt'
        'seed': 1,
        'runtime_noise_sigma': 0.05,  # lognormal sigma on task durations
        'max_retries': 0,  # failed tasks are not resubmitted by default
        'mpi_launcher': 'mpirun',
        'env': '',

        # Simulated clock origin (first task starts here)
        'epoch': '2019-08-13T15:49:37.938883',
    }

    # ========== SIMULATED CLUSTER ==========
    CLUSTER = {
        'nodes': 2,
        'cores_per_node': 4,
        'np_per_task': 4,
    }

    # ========== PERFORMANCE PROVIDER ==========
    PERF = {
        # Exponent sets of the hypothesis search (rational strings)
        'poly_exponents': ['0', '1/4', '1/3', '1/2', '2/3', '3/4', '1', '4/3', '3/2', '2', '5/2', '3'],
        'log_exponents': [0, 1, 2],
        'min_observations': 4,
        'prediction_floor': 1e-9,  # seconds
    }

    # ========== EOS CAMPAIGN ==========
    EOS = {
        # Synthetic truth: a_res = sum n_k tau^t_k delta^d_k
        'truth_terms': [(1.0, 1.0), (2.0, 2.0), (1.5, 3.0)],
        'truth_coefficients': [-1.5, -0.8, 0.6],
        'fit_terms': [(1.0, 1.0), (2.0, 2.0), (1.5, 3.0)],

        # Massieu derivative orders (n, m) sampled per state point
        'derivative_orders': [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)],

        # Initial state grid (reduced units)
        'initial_T': [1.0, 1.375, 1.75, 2.125, 2.5],
        'initial_rho': [0.1, 0.3, 0.5, 0.7, 0.9],

        'sigma_rel': 0.01,
        'epsilon': 1e-4,
        'max_iterations': 10,

        # Refinement grids
        'critical_T_factors': [0.98, 1.00, 1.02],
        'critical_rho_factors': [0.9, 1.0, 1.1],
        'vle_T_factors': [0.85, 0.90, 0.95],
        'vle_scan_points': 400,
        'bisection_xtol': 1e-6,
        'duplicate_rtol': 1e-9,

        # Critical point grid search resolution
        'critical_grid': 200,

        # Synthetic task cost: c0 + c1 * mc_steps / np
        'cost_c0': 2.0,
        'cost_c1': 1.0,
        'mc_steps': 400.0,

        # A change within se_tolerance standard errors also counts as converged; 0 disables
        'se_tolerance': 1.0,

        'workflow_name': 'eos-parameterization',
        'parameter_file': 'EOS_phosgene.par',
        'result_file': 'result.txt',
        'executable': './ms2',
        'taskdir_template': 'workflow/results/T_{T!r}/rho_{rho!r}/step_{step}',
    }

    # ========== TTL ==========
    TTL = {
        'indent': 3,  # continuation indent of predicate lists
        'workflow_file': 'eos-parameterization.ttl',
    }

    # ========== GLOBAL SETTINGS ==========
    GLOBAL = {
        'output_dir': 'results',
        'logs_dir': None,  # no log files unless configured
        'verbose_logging': False,
    }

