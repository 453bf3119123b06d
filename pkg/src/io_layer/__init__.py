"""Event-log parsing and the feature-table and report file formats."""
