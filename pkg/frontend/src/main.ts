import { ApiClient } from './api.js';
import { Dashboard } from './app.js';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');

const dashboard = new Dashboard(new ApiClient(), root);
void dashboard.start();
