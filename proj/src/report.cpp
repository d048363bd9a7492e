namespace exfill { int placeholder_report; }
