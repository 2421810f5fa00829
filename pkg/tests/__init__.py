# Tests for the NLS graph toolkit
