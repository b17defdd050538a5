"""End-to-end tests for bogolyubov scenario runs."""
