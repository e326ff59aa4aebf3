"""Unit tests for logging configuration and run-context stamping."""

import io
import logging
import threading

import pytest

from wecsim.log import (
    LOG_LEVEL_ENV,
    RunContextFilter,
    configure_from_env,
    logger,
    run_context,
    set_log_level,
    set_sim_time,
)


def make_record(msg="message"):
    return logging.LogRecord(
        name="wecsim",
        level=logging.INFO,
        pathname="test.py",
        lineno=1,
        msg=msg,
        args=(),
        exc_info=None,
    )


class TestRunContextFilter:
    """Test run label and simulated-time stamping."""

    @pytest.fixture
    def log_filter(self):
        """Create RunContextFilter for testing."""
        return RunContextFilter()

    def test_defaults_outside_a_run(self, log_filter):
        """Test records outside any run get placeholder values."""
        record = make_record()

        assert log_filter.filter(record) is True
        assert record.run == "-"
        assert record.sim_time == 0.0

    def test_run_label_and_time(self, log_filter):
        """Test records inside a run carry its label and the latest time."""
        record = make_record()
        with run_context("sweep=8"):
            set_sim_time(1.25)
            log_filter.filter(record)

        assert record.run == "sweep=8"
        assert record.sim_time == 1.25

    def test_context_restored(self, log_filter):
        """Test leaving the block restores the outer values."""
        with run_context("outer"):
            set_sim_time(3.0)
            with run_context("inner"):
                set_sim_time(0.5)
            record = make_record()
            log_filter.filter(record)

        assert record.run == "outer"
        assert record.sim_time == 3.0

    def test_threads_keep_labels_apart(self, log_filter):
        """Test concurrent runs in different threads do not see each other's label."""
        seen = {}
        barrier = threading.Barrier(2)

        def worker(label):
            with run_context(label):
                barrier.wait()
                record = make_record()
                log_filter.filter(record)
                seen[label] = record.run

        threads = [threading.Thread(target=worker, args=(n,)) for n in ("a", "b")]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        assert seen == {"a": "a", "b": "b"}


class TestLoggerConfiguration:
    """Test logger setup and configuration."""

    def test_logger_name(self):
        """Test logger has correct name."""
        assert logger.name == "wecsim"

    def test_logger_default_level(self):
        """Test logger default level is INFO."""
        assert logger.level == logging.INFO

    def test_logger_has_run_context_filter(self):
        """Test logger has RunContextFilter installed."""
        assert any(isinstance(f, RunContextFilter) for f in logger.filters)

    def test_propagate_enabled(self):
        """Test logger propagates to root logger."""
        assert logger.propagate is True

    def test_no_console_handler(self):
        """Test logger does not have its own console handler."""
        assert len(logger.handlers) == 0

    def test_set_log_level_valid(self):
        """Test set_log_level accepts valid levels."""
        original_level = logger.level

        try:
            set_log_level("DEBUG")
            assert logger.level == logging.DEBUG

            set_log_level("warning")
            assert logger.level == logging.WARNING
        finally:
            logger.setLevel(original_level)

    def test_set_log_level_invalid(self):
        """Test set_log_level raises for invalid levels."""
        with pytest.raises(ValueError, match="Invalid log level"):
            set_log_level("LOUD")

    def test_configure_from_env(self, monkeypatch):
        """Test the environment variable sets the level."""
        original_level = logger.level
        monkeypatch.setenv(LOG_LEVEL_ENV, "ERROR")

        try:
            assert configure_from_env() == "ERROR"
            assert logger.level == logging.ERROR
        finally:
            logger.setLevel(original_level)

    def test_configure_from_env_unset(self, monkeypatch):
        """Test nothing changes without the environment variable."""
        monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)

        assert configure_from_env() is None
        assert logger.level == logging.INFO


class TestRunContextIntegration:
    """Integration tests for context stamping through a real handler."""

    def test_formatted_output(self):
        """Test a handler can format the stamped attributes."""
        buffer = io.StringIO()
        handler = logging.StreamHandler(buffer)
        handler.addFilter(RunContextFilter())
        handler.setFormatter(logging.Formatter("[%(run)s t=%(sim_time).3f] %(message)s"))
        logger.addHandler(handler)

        try:
            with run_context("demo"):
                set_sim_time(2.5)
                logger.info("tracking")
        finally:
            logger.removeHandler(handler)

        assert buffer.getvalue() == "[demo t=2.500] tracking\n"

    def test_simulation_run_is_labelled(self, make_scenario, caplog):
        """Test records emitted during a run carry the run label."""
        with caplog.at_level(logging.INFO, logger="wecsim"):
            from wecsim.simcore import Simulation

            Simulation(make_scenario(t_end=0.001), label="labelled").run()

        runs = {r.run for r in caplog.records if r.name == "wecsim"}
        assert "labelled" in runs
