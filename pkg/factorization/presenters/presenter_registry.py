# factorization/presenters/presenter_registry.py

class PresenterRegistry:
    """
    Registry for presenter instances.

    This class implements the Singleton pattern to ensure there's only
    one instance of each presenter throughout the application.
    """

    _instance = None

    @classmethod
    def get_instance(cls):
        """
        Get the singleton instance of PresenterRegistry.

        Returns:
            PresenterRegistry: The singleton instance.
        """
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def __init__(self):
        """
        Initialize the presenter registry
        """
        self._dataset_presenter = None
        self._signal_presenter = None
        self._run_presenter = None
        self._report_presenter = None

    def get_dataset_presenter(self):
        """
        Get the dataset presenter instance.

        Returns:
            DatasetPresenter: The dataset presenter instance.
        """
        if self._dataset_presenter is None:
            from .dataset_presenter import DatasetPresenter
            self._dataset_presenter = DatasetPresenter()
        return self._dataset_presenter

    def get_signal_presenter(self):
        if self._signal_presenter is None:
            from .signal_presenter import SignalPresenter
            self._signal_presenter = SignalPresenter()
        return self._signal_presenter

    def get_run_presenter(self):
        """
        Get the run presenter instance.

        Returns:
            RunPresenter: The run presenter instance.
        """
        if self._run_presenter is None:
            from .run_presenter import RunPresenter
            self._run_presenter = RunPresenter()
        return self._run_presenter

    def get_report_presenter(self):
        """
        Get the report presenter instance.

        Returns:
            ReportPresenter: The report presenter instance.
        """
        if self._report_presenter is None:
            from .report_presenter import ReportPresenter
            self._report_presenter = ReportPresenter()
        return self._report_presenter
