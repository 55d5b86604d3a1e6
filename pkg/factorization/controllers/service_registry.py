# factorization/controllers/service_registry.py

class ServiceRegistry:
    """
    Service registry to manage controller instances.

    This class implements the Singleton pattern to ensure there's only
    one instance of each controller throughout the application.
    """

    _instance = None

    @classmethod
    def get_instance(cls):
        """
        Get the singleton instance of ServiceRegistry.

        Returns:
            ServiceRegistry: The singleton instance.
        """
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def __init__(self):
        """Initialize the service registry"""
        self._dataset_controller = None
        self._signal_controller = None
        self._solver_controller = None
        self._evaluation_controller = None
        self._experiment_controller = None

    def get_dataset_controller(self):
        """
        Get the dataset controller instance.

        Returns:
            DatasetController: The dataset controller instance.
        """
        if self._dataset_controller is None:
            from .dataset_controller import DatasetController
            self._dataset_controller = DatasetController()
        return self._dataset_controller

    def get_signal_controller(self):
        if self._signal_controller is None:
            from .signal_controller import SignalController
            self._signal_controller = SignalController()
        return self._signal_controller

    def get_solver_controller(self):
        """
        Get the solver controller instance.

        Returns:
            SolverController: The solver controller instance.
        """
        if self._solver_controller is None:
            from .solver_controller import SolverController
            self._solver_controller = SolverController()
        return self._solver_controller

    def get_evaluation_controller(self):
        if self._evaluation_controller is None:
            from .evaluation_controller import EvaluationController
            self._evaluation_controller = EvaluationController()
        return self._evaluation_controller

    def get_experiment_controller(self):
        """
        Get the Monte-Carlo experiment controller instance.

        Returns:
            ExperimentController: The experiment controller instance.
        """
        if self._experiment_controller is None:
            from .experiment_controller import ExperimentController
            self._experiment_controller = ExperimentController()
        return self._experiment_controller
