"""bogolyubov tests."""
