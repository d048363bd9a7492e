namespace exfill { int placeholder_search; }
