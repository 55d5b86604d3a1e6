# factorization/controllers/__init__.py
from .base_controller import BaseController
from .dataset_controller import DatasetController
from .evaluation_controller import EvaluationController
from .experiment_controller import ExperimentController
from .signal_controller import SignalController
from .solver_controller import SolverController
from .service_registry import ServiceRegistry

# Export the registry getter for easy access
get_registry = ServiceRegistry.get_instance

__all__ = [
    'BaseController',
    'DatasetController',
    'EvaluationController',
    'ExperimentController',
    'SignalController',
    'SolverController',
    'ServiceRegistry',
    'get_registry',
]
