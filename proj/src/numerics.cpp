namespace exfill { int placeholder_numerics; }
