namespace exfill { int placeholder_cuspgeom; }
