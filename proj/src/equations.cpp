namespace exfill { int placeholder_equations; }
