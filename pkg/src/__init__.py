# NLS ground states on metric graphs
